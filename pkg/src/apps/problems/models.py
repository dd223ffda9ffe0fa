import re
from dataclasses import dataclass, field
from typing import Callable

from apps.core.exceptions import UnknownProblemError
from apps.core.models import ProblemDefinition

_FAMILY_NAME = re.compile(r"^(?P<family>[a-z]+)-(?P<ndim>\d+)$")


@dataclass
class ProblemCatalog:
    """
    Named collection of benchmark problems.

    Fields:
    - `fixed`: constructors of problems with a fixed dimension, by name.
    - `families`: constructors taking the dimension, by family prefix; the
      name `<family>-<d>` builds `families[family](d)`.
    - `listed`: names advertised by `names()`.
    """

    fixed: dict[str, Callable[[], ProblemDefinition]] = field(default_factory=dict)
    families: dict[str, Callable[[int], ProblemDefinition]] = field(
        default_factory=dict
    )
    listed: tuple[str, ...] = ()

    def names(self):
        return self.listed

    def __contains__(self, name):
        try:
            self._constructor(name)
        except UnknownProblemError:
            return False
        return True

    def _constructor(self, name):
        if name in self.fixed:
            return self.fixed[name]
        match = _FAMILY_NAME.match(name)
        if match and match["family"] in self.families:
            family = self.families[match["family"]]
            ndim = int(match["ndim"])
            return lambda: family(ndim)
        raise UnknownProblemError(
            f"unknown problem {name!r}; available: {', '.join(self.listed)}"
        )

    def get(self, name):
        """
        Build the problem registered under `name`.

        Raises:
            UnknownProblemError: No such entry.
            PreconditionError: The family does not support that dimension.
        """
        return self._constructor(name)()
