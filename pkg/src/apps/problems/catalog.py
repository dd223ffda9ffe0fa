from apps.problems import benchmarks
from apps.problems.models import ProblemCatalog

CATALOG = ProblemCatalog(
    fixed={
        "eggbox": benchmarks.eggbox,
        "eightschools": benchmarks.eight_schools,
    },
    families={
        "gauss": benchmarks.gaussian,
        "box": benchmarks.box,
        "rosenbrock": benchmarks.rosenbrock,
        "loggamma": benchmarks.loggamma,
        "funnel": benchmarks.funnel,
    },
    listed=(
        "gauss-4",
        "box-5",
        "rosenbrock-2",
        "rosenbrock-20",
        "eggbox",
        "loggamma-2",
        "loggamma-10",
        "funnel-10",
        "eightschools",
    ),
)


def get_problem(name):
    """Look up a benchmark by its catalog name, e.g. "gauss-4" or "funnel-2"."""
    return CATALOG.get(name)


def available_problems():
    return CATALOG.names()
