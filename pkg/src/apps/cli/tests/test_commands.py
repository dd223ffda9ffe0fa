import io
import tempfile
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from unittest import TestCase

from apps.cli.commands import create_parser, execute_from_command_line
from apps.cli.models import ExitStatus
from apps.report.models import TraceRecord
from apps.report.writers import write_trace_records

QUIET = ("--log-level", "WARNING")
SMALL_RUN = ("--nlive", "20", "--bootstrap-rounds", "5", "--max-iterations", "80")


def _synthetic_trace(path, rjd, num_records=200, num_live=20):
    records = [
        TraceRecord(
            problem="synthetic",
            num_live=num_live,
            num_steps=2,
            seed=1,
            iter=i,
            logl=float(i),
            logv=-float(i) / num_live,
            logw=float(i) - float(i) / num_live,
            insertion_rank=i % num_live,
            jd=rjd,
            r=1.0,
            rjd=rjd,
        )
        for i in range(num_records)
    ]
    with open(path, "wb") as sink:
        write_trace_records(records, sink)


class CommandTestCase(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.output_dir = Path(self.tmp.name)
        self.stdout = io.StringIO()
        self.stderr = io.StringIO()

    def tearDown(self):
        self.tmp.cleanup()

    def call(self, *argv):
        with redirect_stdout(self.stdout), redirect_stderr(self.stderr):
            return execute_from_command_line([str(arg) for arg in argv])

    def call_eggbox(self, command, output_dir, *extra):
        return self.call(
            command, "--problem", "eggbox", "--output-dir", output_dir, *extra, *QUIET
        )


class ParserTestCase(TestCase):
    """
    Test case for argument parsing.
    """

    def test_defaults(self):
        args = create_parser().parse_args(["run", "--problem", "eggbox"])
        self.assertIsNone(args.nsteps)
        self.assertEqual(args.seed, 1)

    def test_int_lists(self):
        args = create_parser().parse_args(["radius-scaling", "--ndim-list", "2,4"])
        self.assertEqual(args.ndim_list, [2, 4])
        self.assertEqual(args.nlive_list, [100, 400])


class RunCommandTestCase(CommandTestCase):
    """
    Test case for `run`.
    """

    def test_run_writes_its_artefacts(self):
        status = self.call_eggbox("run", self.output_dir, "--nsteps", 2, *SMALL_RUN)
        self.assertIn(status, {ExitStatus.ACCEPT, ExitStatus.RERUN})
        directory = self.output_dir / "eggbox-K20-M2-s1"
        self.assertTrue((directory / "trace.csv").exists())
        self.assertTrue((directory / "summary.json").exists())
        self.assertIn("eggbox K=20 M=2 seed=1", self.stdout.getvalue())

    def test_same_seed_same_trace(self):
        traces = []
        for name in ("first", "second"):
            self.call_eggbox("run", self.output_dir / name, "--nsteps", 2, *SMALL_RUN)
            path = self.output_dir / name / "eggbox-K20-M2-s1" / "trace.csv"
            traces.append(path.read_bytes())
        self.assertEqual(traces[0], traces[1])

    def test_unknown_problem(self):
        status = self.call("run", "--problem", "nosuch", *QUIET)
        self.assertEqual(status, ExitStatus.ERROR)
        self.assertIn("nosuch", self.stderr.getvalue())

    def test_invalid_arguments(self):
        self.assertEqual(self.call("run", "--nlive", "many"), ExitStatus.ERROR)
        self.assertEqual(self.call("walk"), ExitStatus.ERROR)

    def test_too_few_live_points(self):
        status = self.call("run", "--problem", "eggbox", "--nlive", 3, *QUIET)
        self.assertEqual(status, ExitStatus.ERROR)


class SequenceCommandTestCase(CommandTestCase):
    """
    Test case for `sequence`.
    """

    def test_sequence_table(self):
        status = self.call_eggbox(
            "sequence", self.output_dir, "--schedule", "2,4", *SMALL_RUN
        )
        self.assertIn(status, {ExitStatus.ACCEPT, ExitStatus.RERUN})
        table = self.output_dir / "eggbox-K20-sequence-s1" / "sequence.csv"
        lines = table.read_text().splitlines()
        self.assertEqual(len(lines), 3)
        self.assertTrue(lines[2].startswith("4,2,"))
        self.assertTrue((self.output_dir / "eggbox-K20-M4-s2").is_dir())
        self.assertIn("recommendation:", self.stdout.getvalue())

    def test_schedule_must_double(self):
        status = self.call_eggbox("sequence", self.output_dir, "--schedule", "2,5")
        self.assertEqual(status, ExitStatus.ERROR)


class RadiusScalingCommandTestCase(CommandTestCase):
    """
    Test case for `radius-scaling`.
    """

    def test_table_is_written(self):
        argv = ["--nlive-list", "20", "--ndim-list", "2,3", "--repeats", 2]
        argv += ["--bootstrap-rounds", 5, "--output-dir", self.output_dir]
        status = self.call("radius-scaling", *argv, *QUIET)
        self.assertEqual(status, ExitStatus.ACCEPT)
        table = self.output_dir / "radius-scaling-ball-s1.csv"
        lines = table.read_text().splitlines()
        self.assertEqual(len(lines), 3)


class CheckCommandTestCase(CommandTestCase):
    """
    Test case for `check` on synthetic traces.
    """

    def test_short_jumps_ask_for_a_rerun(self):
        path = self.output_dir / "short.csv"
        _synthetic_trace(path, rjd=0.5)
        self.assertEqual(self.call("check", path, *QUIET), ExitStatus.RERUN)
        self.assertIn("rerun_with_doubled_steps", self.stdout.getvalue())

    def test_long_jumps_are_accepted(self):
        path = self.output_dir / "long.csv"
        _synthetic_trace(path, rjd=2.0)
        self.assertEqual(self.call("check", path, *QUIET), ExitStatus.ACCEPT)

    def test_truncated_trace(self):
        path = self.output_dir / "truncated.csv"
        _synthetic_trace(path, rjd=2.0)
        path.write_bytes(path.read_bytes()[:-5])
        self.assertEqual(self.call("check", path, *QUIET), ExitStatus.ERROR)
        self.assertIn("line 201", self.stderr.getvalue())

    def test_missing_file(self):
        status = self.call("check", self.output_dir / "absent.csv", *QUIET)
        self.assertEqual(status, ExitStatus.ERROR)
