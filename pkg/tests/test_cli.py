import jsonschema
import orjson
import pytest

from cli import cli
from schemas import CaseReport, ProfileReport


def run(runner, *args):
    return runner.invoke(cli, list(args))


class TestCaseReports:
    @pytest.mark.parametrize("name, args", [
        ("case_poisson.txt", ["case", "poisson", "--d", "2", "--p", "2"]),
        ("case_ppoisson.txt", ["case", "ppoisson", "--d", "2", "--p", "3/2", "--sbar", "8/5"]),
        ("case_stokes.txt", ["case", "stokes", "--d", "3", "--eps", "1", "--sigma", "1/2", "--sbar2", "3/2"]),
    ])
    def test_golden_text(self, runner, golden, name, args):
        result = run(runner, *args)
        assert result.exit_code == 0, result.output
        assert result.stdout == (golden / name).read_text(encoding="utf-8")

    def test_poisson_json(self, runner):
        result = run(runner, "case", "poisson", "--d", "2", "--p", "2", "--json")
        assert result.exit_code == 0
        report = CaseReport.model_validate(orjson.loads(result.stdout))
        assert report.values["alpha_bar"] == 3
        assert orjson.loads(result.stdout)["values"]["s_bar"] == "3/2"

    def test_ppoisson_case_two(self, runner):
        result = run(runner, "case", "ppoisson", "--d", "2", "--p", "3/2", "--sbar", "5/3")
        assert result.exit_code == 0
        assert "case 2: 1 + 1/p ≤ s̄_p ≤ ᾱ_p, no finite bound" in result.stdout

    def test_ppoisson_below_floor(self, runner):
        result = run(runner, "case", "ppoisson", "--d", "2", "--p", "3/2", "--sbar", "1")
        assert result.exit_code == 3
        assert "❌" in result.stderr

    def test_ppoisson_needs_hypothesis(self, runner):
        assert run(runner, "case", "ppoisson", "--d", "2", "--p", "3/2").exit_code == 2

    def test_stokes_case_two(self, runner):
        result = run(runner, "case", "stokes", "--d", "3", "--sigma", "1/2", "--sbar2", "2")
        assert result.exit_code == 0
        assert "case 2: 3/2 + m ≤ s̄₂ ≤ ᾱ₂, no finite bound" in result.stdout

    def test_svg_is_deterministic(self, runner, tmp_path):
        first, second = tmp_path / "a.svg", tmp_path / "b.svg"
        for path in (first, second):
            result = run(runner, "case", "poisson", "--d", "2", "--p", "2", "--svg", str(path))
            assert result.exit_code == 0
        assert first.read_bytes() == second.read_bytes()
        assert first.read_text(encoding="utf-8").lstrip().startswith("<?xml")


class TestEmbed:
    def test_direct_rule(self, runner):
        result = run(runner, "embed", "B^{2}_{2,2}", "B^{1}_{4,4}", "--d", "2")
        assert result.exit_code == 0
        assert result.stdout == "Embeds [rule iv]\n"

    def test_chain_is_printed(self, runner):
        result = run(runner, "embed", "B^{2}_{1,1}", "B^{1}_{2,2}", "--d", "2")
        lines = result.stdout.splitlines()
        assert lines[0] == "Embeds [identity, rule v]"
        assert len(lines) == 3 and all("↪" in line for line in lines[1:])

    def test_not_embeds(self, runner):
        result = run(runner, "embed", "B^{2}_{1,4}", "F^{1}_{2,4}", "--d", "2")
        assert result.stdout.strip() == "NotEmbeds [rule v]"
        assert result.exit_code == 0

    def test_json(self, runner):
        result = run(runner, "embed", "B^{1}_{2,1}", "F^{1}_{2,3}", "--d", "2", "--json")
        payload = orjson.loads(result.stdout)
        assert payload["outcome"] == "Embeds"
        assert payload["chain"][0]["from"] == "B^{1}_{2,1}"

    def test_bad_space(self, runner):
        result = run(runner, "embed", "X^{1}_{2,2}", "B^{1}_{2,2}", "--d", "2")
        assert result.exit_code == 2
        assert "❌" in result.stderr

    def test_interpolate(self, runner):
        result = run(runner, "interpolate", "B^{3/2}_{2,2}", "B^{2}_{1,1}", "1/2")
        assert result.stdout.strip() == "B^{7/4}_{4/3,4/3}"


class TestProfile:
    def test_two_rays(self, runner, profiles):
        result = run(runner, "profile", str(profiles / "poisson_two_ray.json"))
        assert result.exit_code == 0, result.output
        report = orjson.loads(result.stdout)
        assert report["limit_s"] == "3/2"
        assert report["limit_alpha"] == "3"
        assert report["answers"][2]["bound"]["value"] == "3"
        assert report["answers"][2]["bound"]["mu"] == "1"
        assert "alpha-upper-bound" in report["citations"]

    def test_limit_rays_give_the_same_indices(self, runner, profiles):
        result = run(runner, "profile", str(profiles / "poisson_limit_rays.json"))
        report = orjson.loads(result.stdout)
        assert (report["limit_s"], report["limit_alpha"]) == ("3/2", "3")

    def test_envelope_of_two_rays(self, runner, profiles):
        report = orjson.loads(run(runner, "profile", str(profiles / "poisson_two_ray.json")).stdout)
        assert report["envelope"]["breakpoints"] == [["0", "3/4"], ["1/4", "5/4"], ["1/2", "3/2"]]

    def test_empty_profile(self, runner, profiles):
        result = run(runner, "profile", str(profiles / "empty.json"))
        assert result.exit_code == 0
        assert orjson.loads(result.stdout)["limit_s"] == "-inf"

    def test_inconsistent(self, runner, profiles):
        result = run(runner, "profile", str(profiles / "inconsistent.json"))
        assert result.exit_code == 3
        assert "z ≤ s̄_p ≤ ᾱ_p" in result.stderr

    def test_malformed(self, runner, profiles):
        assert run(runner, "profile", str(profiles / "malformed.json")).exit_code == 2

    def test_missing_file(self, runner, tmp_path):
        assert run(runner, "profile", str(tmp_path / "nope.json")).exit_code == 2

    def test_decimal_companion(self, runner, profiles):
        result = run(runner, "--decimal", "profile", str(profiles / "poisson_two_ray.json"))
        assert orjson.loads(result.stdout)["answers"][0]["decimal"] == "1.5"

    def test_decimal_digits_follow_settings(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("SMOOTHCALC_DECIMAL_DIGITS", "3")
        doc = tmp_path / "lower.json"
        doc.write_bytes(orjson.dumps({"dimension": 2, "queries": [
            {"kind": "s_lower", "alpha": "2", "invP": "2/3", "invPz": "7/12", "z": "3/2"},
            {"kind": "alpha_upper", "invP": "1/2", "sBar": "3/2", "invPz": "0", "z": "5/6"},
        ]}))
        result = run(runner, "--decimal", "profile", str(doc))
        assert result.exit_code == 0, result.output
        lower, upper = orjson.loads(result.stdout)["answers"]
        assert (lower["value"], lower["decimal"]) == ("20/13", "1.54")
        assert (upper["value"], upper["decimal"]) == ("9/2", "4.5")

    def test_report_validates_against_model(self, runner, profiles, tmp_path):
        out = tmp_path / "report.json"
        result = run(runner, "profile", str(profiles / "poisson_two_ray.json"), "--out", str(out))
        assert result.exit_code == 0
        report = ProfileReport.model_validate(orjson.loads(out.read_bytes()))
        assert report.limit_alpha == 3

    def test_diagram(self, runner, profiles, tmp_path):
        out = tmp_path / "region.svg"
        result = run(runner, "diagram", str(profiles / "poisson_two_ray.json"), "--out", str(out),
                     "--point", "1,2,target")
        assert result.exit_code == 0, result.output
        assert ">target<" in out.read_text(encoding="utf-8")

    def test_diagram_bad_point(self, runner, profiles, tmp_path):
        result = run(runner, "diagram", str(profiles / "poisson_two_ray.json"), "--out",
                     str(tmp_path / "x.svg"), "--point", "1")
        assert result.exit_code == 2


class TestBounds:
    def test_alpha(self, runner):
        result = run(runner, "bound", "alpha", "--d", "2", "--p", "2", "--sbar", "3/2", "--pz", "4", "--z", "5/4")
        assert result.exit_code == 0
        assert result.stdout.strip() == "ᾱ_p ≤ 3 (μ = 1)"

    def test_alpha_infinite_pz(self, runner):
        result = run(runner, "bound", "alpha", "--d", "2", "--p", "2", "--sbar", "3/2", "--pz", "inf", "--z", "1")
        assert result.stdout.strip() == "ᾱ_p ≤ 3 (μ = 1/2)"

    def test_alpha_json(self, runner):
        result = run(runner, "bound", "alpha", "--d", "2", "--p", "2", "--sbar", "2", "--pz", "4", "--z", "5/4",
                     "--json")
        assert orjson.loads(result.stdout) == {"mu": "3/2", "outcome": "NoBound", "reason": "zBelowOrEqualMu",
                                               "value": None}

    def test_alpha_inconsistent(self, runner):
        result = run(runner, "bound", "alpha", "--d", "2", "--p", "2", "--sbar", "3/2", "--pz", "4", "--z", "2")
        assert result.exit_code == 3

    def test_rejects_bad_rational(self, runner):
        result = run(runner, "bound", "alpha", "--d", "2", "--p", "1/x", "--sbar", "3/2", "--pz", "4", "--z", "1")
        assert result.exit_code == 2
        assert "position 2" in result.output

    def test_s_lower_with_decimal(self, runner):
        result = run(runner, "--decimal", "bound", "s-lower", "--d", "2", "--alpha", "2", "--p", "3/2",
                     "--pz", "12/7", "--z", "3/2")
        assert result.stdout.strip() == "s̄_p ≥ 20/13 (≈ 1.53846)"

    def test_s_transfer(self, runner):
        result = run(runner, "bound", "s-transfer", "--sbar", "3/2", "--p", "2", "--z", "2", "--pz", "1",
                     "--phat", "4")
        assert result.stdout.strip() == "s̄_p̂ ≤ 5/4"


class TestSchema:
    def test_names_every_field(self, runner):
        result = run(runner, "schema")
        assert result.exit_code == 0
        schema = orjson.loads(result.stdout)
        assert set(schema["properties"]) == set(ProfileReport.model_fields)

    def test_matches_shipped_schema(self, runner, shipped_schema):
        result = run(runner, "schema")
        assert result.stdout == shipped_schema.read_text(encoding="utf-8")

    def test_out_file_matches_shipped_schema(self, runner, shipped_schema, tmp_path):
        out = tmp_path / "report.schema.json"
        assert run(runner, "schema", "--out", str(out)).exit_code == 0
        assert out.read_bytes() == shipped_schema.read_bytes()

    @pytest.mark.parametrize("name", ["poisson_two_ray.json", "poisson_limit_rays.json", "empty.json"])
    def test_fixture_reports_validate(self, runner, profiles, shipped_schema, name):
        result = run(runner, "--decimal", "profile", str(profiles / name))
        assert result.exit_code == 0, result.output
        jsonschema.validate(instance=orjson.loads(result.stdout), schema=orjson.loads(shipped_schema.read_bytes()))

    def test_schema_rejects_float_values(self, runner, profiles, shipped_schema):
        report = orjson.loads(run(runner, "profile", str(profiles / "poisson_two_ray.json")).stdout)
        report["limit_s"] = 1.5
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(instance=report, schema=orjson.loads(shipped_schema.read_bytes()))


class TestCite:
    def test_known_keys(self, runner):
        result = run(runner, "cite", "z-sbar-alpha-chain")
        assert result.stdout == "z-sbar-alpha-chain: z ≤ s̄_p ≤ ᾱ_p\n"

    def test_unknown_key(self, runner):
        assert run(runner, "cite", "nope").exit_code == 2

    def test_every_reported_key_resolves(self, runner, profiles):
        from citations import get_citation
        from reports import QUERY_CITATIONS

        keys = {key for group in QUERY_CITATIONS.values() for key in group}
        for args in (["case", "poisson", "--d", "2", "--p", "2", "--json"],
                     ["case", "stokes", "--d", "3", "--sigma", "1/2", "--sbar2", "3/2", "--json"],
                     ["case", "ppoisson", "--d", "2", "--p", "3/2", "--sbar", "8/5", "--json"]):
            keys.update(orjson.loads(run(runner, *args).stdout)["citations"])
        assert all(get_citation(key) is not None for key in keys)
