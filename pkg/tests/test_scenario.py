import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from octoarm.scenario import ScenarioError, ScenarioFile, parse_scenario, parse_scenario_text


class TestDefaults:
    def test_empty_document_is_case_study(self):
        scen = parse_scenario_text("{}")
        assert scen == ScenarioFile()
        assert scen.geometry.length_m == 0.418
        assert scen.tcam.params.resistance_ohm == 18.0
        assert scen.tcam.waveform.duration_s == pytest.approx(2 * math.pi)
        assert scen.sweep.step == 0.5 and scen.fluid.free_stream_mps == 0.2

    def test_hash_ignores_formatting(self):
        a = parse_scenario_text('{"fluid": {"free_stream_mps": 0.2}}')
        b = parse_scenario_text("{}")
        assert a.content_hash() == b.content_hash()
        assert parse_scenario_text('{"fluid": {"free_stream_mps": 0.4}}').content_hash() != a.content_hash()

    def test_round_trip_through_resolved(self, tmp_path):
        scen = parse_scenario_text('{"solver": {"node_count": 101}, "toggles": {"fluid": false}}')
        path = tmp_path / "s.json"
        path.write_text(json.dumps({k: v for k, v in scen.resolved().items() if k in ("solver", "toggles")}))
        again = parse_scenario(path)
        assert again.solver == scen.solver and again.toggles == scen.toggles
        assert again.arm().geometry.node_count == 101

    def test_c_lin_override(self):
        scen = parse_scenario_text('{"tcam": {"c_lin_N_per_C": 0.3}}')
        assert scen.tcam.c_lin() == (0.3, "override")


class TestErrors:
    @pytest.mark.parametrize(
        "text, key, line",
        [
            ('{\n  "rod": {\n    "lenght_m": 1\n  }\n}', "rod.lenght_m", 3),
            ('{\n  "fluid": {\n    "water_density_kgpm3": -1\n  }\n}', "fluid.water_density_kgpm3", 3),
            ('{\n  "solver": {"relaxation": 2}\n}', "solver.relaxation", 2),
            ('{"colour": 1}', "colour", 1),
            ('{"schema_version": 9}', "schema_version", 1),
        ],
    )
    def test_error_names_key_and_line(self, text, key, line):
        with pytest.raises(ScenarioError) as info:
            parse_scenario_text(text)
        assert info.value.key == key and info.value.line == line
        assert key in str(info.value) and f"line {line}" in str(info.value)

    def test_malformed_json_reports_line(self):
        with pytest.raises(ScenarioError) as info:
            parse_scenario_text('{\n "rod": {,}\n}')
        assert info.value.line == 2

    def test_nan_rejected(self):
        with pytest.raises(ScenarioError):
            parse_scenario_text('{"fluid": {"free_stream_mps": NaN}}')

    def test_duplicate_key_rejected(self):
        with pytest.raises(ScenarioError):
            parse_scenario_text('{"rod": {}, "rod": {}}')

    def test_layout_must_cover_arm(self):
        with pytest.raises(ScenarioError) as info:
            parse_scenario_text('{"layout": {"segments": [{"length_m": 0.2}, {"length_m": 0.1}]}}')
        assert info.value.key == "layout"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError):
            parse_scenario(tmp_path / "nope.json")

    @given(st.text(alphabet=st.characters(codec="ascii"), max_size=40))
    def test_arbitrary_text_never_crashes(self, text):
        try:
            parse_scenario_text(text)
        except ScenarioError:
            pass
