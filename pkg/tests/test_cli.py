"""
Tests for the lukas-ascents command line.

Commands are run in-process with click's CliRunner; stdout carries the
rendered result and exit codes follow the error categories.
"""

import json

import pytest
import structlog
from click.testing import CliRunner

from ascents import __version__
from ascents.cli import EXIT_INVALID_INPUT, EXIT_NUMERICAL, cli, main
from ascents.errors import NoConvergence


@pytest.fixture(autouse=True)
def reset_logging():
    """The CLI points structlog at the captured stderr; undo it after each test."""
    yield
    structlog.reset_defaults()


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _payload(result) -> dict:
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)["payload"]


@pytest.mark.integration
class TestCount:
    """Test suite for the count command."""

    def test_catalan(self, runner):
        result = runner.invoke(cli, ["count", "--steps", "-1,1", "--kind", "excursion", "-n", "6"])
        payload = _payload(result)

        assert payload["count"] == {"type": "int", "value": "5"}
        assert payload["kind"] == "excursion"

    def test_envelope(self, runner):
        result = runner.invoke(cli, ["count", "--steps", "2,-1", "-n", "3"])
        envelope = json.loads(result.stdout)

        assert envelope["tool"] == "lukas-ascents"
        assert envelope["version"] == __version__
        assert envelope["steps"] == "-1,2"
        assert envelope["command"] == "count"

    def test_kind_abbreviation(self, runner):
        result = runner.invoke(cli, ["count", "--steps", "-1,2", "--kind", "d", "-n", "4"])
        assert _payload(result)["count"]["value"] == "3"

    def test_degenerate_set(self, runner):
        result = runner.invoke(cli, ["count", "--steps", "-1,0", "-n", "4"])
        assert result.exit_code == EXIT_INVALID_INPUT

    def test_dispersed_over_zero_step(self, runner):
        result = runner.invoke(
            cli, ["count", "--steps", "-1,0,1", "--kind", "dispersed", "-n", "4"]
        )

        assert result.exit_code == EXIT_INVALID_INPUT
        assert "Error:" in result.stderr

    def test_unknown_kind(self, runner):
        result = runner.invoke(cli, ["count", "--steps", "-1,1", "--kind", "bridge", "-n", "4"])
        assert result.exit_code == EXIT_INVALID_INPUT


@pytest.mark.integration
class TestDistAndMoments:
    """Test suite for the dist and moments commands."""

    def test_dist_csv(self, runner):
        result = runner.invoke(
            cli, ["dist", "--steps", "-1,1", "-n", "6", "-r", "1", "--format", "csv"]
        )

        assert result.exit_code == 0
        assert result.stdout == "k,count\n0,1\n1,3\n2,0\n3,1\n"

    def test_dist_json(self, runner):
        payload = _payload(runner.invoke(cli, ["dist", "--steps", "-1,1", "-n", "6"]))

        assert payload["total"]["value"] == "5"
        assert [row["count"]["value"] for row in payload["rows"]] == ["1", "3", "0", "1"]

    def test_moments(self, runner):
        payload = _payload(runner.invoke(cli, ["moments", "--steps", "-1,1", "-n", "6"]))

        assert payload["mean"] == {"type": "rational", "num": "6", "den": "5"}
        assert payload["variance"] == {"type": "rational", "num": "24", "den": "25"}

    def test_empty_family(self, runner):
        result = runner.invoke(cli, ["moments", "--steps", "-1,1", "-n", "5"])
        assert result.exit_code == EXIT_INVALID_INPUT


@pytest.mark.integration
class TestConstants:
    """Test suite for the constants command."""

    def test_ternary(self, runner):
        result = runner.invoke(cli, ["constants", "--steps", "-1,2", "--digits", "30"])
        payload = _payload(result)

        assert payload["tau"]["type"] == "approx"
        assert payload["tau"]["value"].startswith("0.793700525984")
        assert payload["tau"]["digits"] == 30
        assert payload["rho"]["value"].startswith("0.529133683989")
        assert payload["c"]["value"].startswith("1.5")
        assert payload["p"] == {"type": "int", "value": "3"}
        assert payload["tau_exact_one"] is False

    def test_digits_out_of_range(self, runner):
        result = runner.invoke(cli, ["constants", "--steps", "-1,2", "--digits", "5"])
        assert result.exit_code == EXIT_INVALID_INPUT

    def test_no_convergence(self, runner, mocker):
        mocker.patch(
            "ascents.cli.asymptotics.structural_constants",
            side_effect=NoConvergence("root finder stalled"),
        )

        result = runner.invoke(cli, ["constants", "--steps", "-1,2"])

        assert result.exit_code == EXIT_NUMERICAL
        assert "root finder stalled" in result.stderr


@pytest.mark.integration
class TestSeries:
    """Test suite for the series command."""

    def test_dyck_excursions(self, runner):
        payload = _payload(
            runner.invoke(cli, ["series", "--steps", "-1,1", "--order", "6", "--format", "json"])
        )
        at_six = [
            row["coefficient"]["value"] for row in payload["rows"] if row["n"]["value"] == "6"
        ]

        assert at_six[:4] == ["1", "3", "0", "1"]

    def test_meander_csv_header(self, runner):
        result = runner.invoke(
            cli, ["series", "--steps", "-1,1", "--kind", "m", "--order", "3", "--format", "csv"]
        )

        assert result.exit_code == 0
        assert result.stdout.splitlines()[0] == "n,k,coefficient"


@pytest.mark.integration
class TestAsymptotics:
    """Test suite for the asym and compare commands."""

    def test_asym_mean(self, runner):
        payload = _payload(
            runner.invoke(cli, ["asym", "--steps", "-1,2", "-n", "300", "--digits", "20"])
        )

        assert payload["value"]["type"] == "approx"
        assert payload["quantity"] == "mean"

    def test_dispersed_variance_unavailable(self, runner):
        result = runner.invoke(
            cli,
            [
                "asym", "--steps", "-1,2", "--kind", "dispersed", "-n", "30",
                "--quantity", "variance",
            ],
        )
        assert result.exit_code == EXIT_INVALID_INPUT

    def test_period_mismatch(self, runner):
        result = runner.invoke(cli, ["asym", "--steps", "-1,2", "-n", "31"])
        assert result.exit_code == EXIT_INVALID_INPUT

    def test_compare_rows(self, runner):
        result = runner.invoke(
            cli, ["compare", "--steps", "-1,0,1", "-n", "20", "-n", "40", "-n", "80"]
        )
        payload = _payload(result)

        assert [row["n"]["value"] for row in payload["rows"]] == ["20", "40", "80"]
        assert isinstance(payload["decay_exponent"], float)


@pytest.mark.integration
class TestSample:
    """Test suite for the sample command."""

    def test_single_path(self, runner):
        payload = _payload(
            runner.invoke(cli, ["sample", "--steps", "-1,2", "-n", "3", "--seed", "4"])
        )

        assert payload["path"] == "2,-1,-1"
        assert payload["ascents"]["value"] == "1"

    def test_reproducible(self, runner):
        args = ["sample", "--steps", "-1,0,1", "--kind", "meander", "-n", "25", "--seed", "9"]
        assert runner.invoke(cli, args).stdout == runner.invoke(cli, args).stdout

    def test_monte_carlo(self, runner):
        payload = _payload(
            runner.invoke(cli, ["sample", "--steps", "-1,1", "-n", "6", "--trials", "50"])
        )
        assert payload["trials"]["value"] == "50"

    def test_zero_trials(self, runner):
        result = runner.invoke(cli, ["sample", "--steps", "-1,1", "-n", "6", "--trials", "0"])
        assert result.exit_code == EXIT_INVALID_INPUT

    def test_normality(self, runner):
        payload = _payload(
            runner.invoke(
                cli,
                ["sample", "--steps", "-1,2", "-n", "60", "--trials", "200", "--normality"],
            )
        )
        assert 0.0 <= payload["ks_statistic"] <= 1.0

    def test_normality_options(self, runner):
        base = ["sample", "--steps", "-1,2", "-n", "60", "--trials", "200", "--normality"]
        default = _payload(runner.invoke(cli, base))
        explicit = _payload(runner.invoke(cli, [*base, "--centering", "leading"]))
        smoothed = _payload(runner.invoke(cli, [*base, "--centering", "full", "--jitter"]))

        assert default["ks_statistic"] == explicit["ks_statistic"]
        assert 0.0 <= smoothed["ks_statistic"] <= 1.0
        assert smoothed["ks_statistic"] != default["ks_statistic"]


@pytest.mark.integration
class TestTree:
    """Test suite for the tree command."""

    def test_path_to_tree(self, runner):
        payload = _payload(
            runner.invoke(cli, ["tree", "--steps", "-1,1", "-r", "2"], input="1,1,-1,-1\n")
        )

        assert payload["tree"] == "((()())())"
        assert payload["nodes"]["value"] == "5"
        assert payload["ascents"]["value"] == "1"

    def test_tree_to_path(self, runner):
        payload = _payload(runner.invoke(cli, ["tree", "--steps", "-1,2"], input="(()()())"))
        assert payload["path"] == "2,-1,-1"

    def test_garbage(self, runner):
        result = runner.invoke(cli, ["tree", "--steps", "-1,1"], input="up,down")
        assert result.exit_code == EXIT_INVALID_INPUT

    def test_illegal_outdegree(self, runner):
        result = runner.invoke(cli, ["tree", "--steps", "-1,1"], input="(())")
        assert result.exit_code == EXIT_INVALID_INPUT


@pytest.mark.integration
class TestGlobalOptions:
    """Version and log level."""

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])

        assert result.exit_code == 0
        assert __version__ in result.stdout

    def test_bad_log_level(self, runner):
        result = runner.invoke(cli, ["--log-level", "LOUD", "count", "--steps", "-1,1", "-n", "2"])
        assert result.exit_code == EXIT_INVALID_INPUT

    def test_main_exits_with_command_code(self):
        with pytest.raises(SystemExit) as exc_info:
            main(["count", "--steps", "-1,0", "-n", "2"])

        assert exc_info.value.code == EXIT_INVALID_INPUT
