"""Tests for suite parsing, expectations and the batch runner."""

import pytest

from core.conformal import MobiusDisk
from core.export.exporter import Exporter
from core.report import Expectation, IdentityReport
from core.suite import (
    ConfigError, SuiteConfig, SuiteRunner, Tolerances, circle_expectation, parse_mobius_list,
    parse_suite, planar_expectation, run_suite, split_map_ids,
)
from presets.preset_manager import PresetManager, get_preset_manager
from utils.resources import get_suites_path


def report(name: str, passed: bool = True, **params) -> IdentityReport:
    return IdentityReport(name, params, 1.0, 1.0, 0.0, 0.0, passed)


class TestParsing:

    def test_minimal(self):
        config = parse_suite("[suite]\nmaps = identity, holo:z2\ngrid = 64\n")
        assert config.maps == ["identity", "holo:z2"]
        assert config.grid == 64
        assert config.n_max == SuiteConfig().n_max

    def test_lists_and_mobius(self):
        config = parse_suite(
            "[suite]\nmaps = identity\nt_grid = 0.5, 2\nmobius = 0:0.3; 0.3:0.5+0.2j\n"
            "centres = 0,0; 0.2,-0.1\n"
        )
        assert config.t_grid == [0.5, 2.0]
        assert config.mobius[1] == MobiusDisk(0.3, 0.5 + 0.2j)
        assert config.centres == [(0.0, 0.0), (0.2, -0.1)]

    def test_inline_map_and_tolerances(self):
        config = parse_suite(
            "[suite]\nmaps = twofold\n[map:twofold]\nkind = blaschke\nfactors = 0, 0.4\n"
            "[tolerances]\nfourier = 1e-9\n"
        )
        assert config.inline_maps['twofold']['kind'] == "blaschke"
        assert config.tolerances.fourier == 1e-9
        assert config.tolerances.stationarity == Tolerances().stationarity

    @pytest.mark.parametrize("text", [
        "[suite]\ncolour = blue\n",
        "[suite]\nmaps = identity\n[extras]\nx = 1\n",
        "[suite]\nmaps = mystery:1\n",
        "[suite]\ngrid = many\n",
        "[suite]\ngrid = 100\n",
        "[suite]\njobs = 0\n",
        "[suite]\nfields = z, w\n",
        "[suite]\nmobius = 0.3\n",
        "[tolerances]\nfouriers = 1e-9\n",
        "[quadrature]\nn_circles = 64\n",
        "[suite\nmaps = identity\n",
    ])
    def test_errors(self, text):
        with pytest.raises(ConfigError):
            parse_suite(text)

    def test_split_map_ids(self):
        ids = split_map_ids("identity, blaschke:0.3,-0.2, const:1,0, holo:z")
        assert ids == ["identity", "blaschke:0.3,-0.2", "const:1,0", "holo:z"]

    def test_parse_mobius_list(self):
        maps = parse_mobius_list("0:0.3; 0.3:0.5")
        assert [(M.alpha, M.a) for M in maps] == [(0.0, 0.3), (0.3, 0.5)]
        with pytest.raises(ConfigError):
            parse_mobius_list("0:x")

    def test_missing_file(self, tmp_path):
        from core.suite import load_suite
        with pytest.raises(ConfigError):
            load_suite(tmp_path / "absent.ini")


class TestTolerances:

    def test_with_all(self):
        tol = Tolerances().with_all(1e-3)
        assert set(tol.to_dict().values()) == {1e-3}

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            Tolerances.from_dict({'nope': 1.0})

    def test_bad_value(self):
        with pytest.raises(ConfigError):
            Tolerances.from_dict({'ball': 'tight'})

    def test_config_round_trip(self):
        config = parse_suite("[suite]\nmaps = identity, holo:z\nmobius = 0:0.3\n")
        assert SuiteConfig.from_dict(config.to_dict()) == config


class TestExpectations:

    def test_regular_maps_pass(self):
        assert circle_expectation(report("poho_s1"), negative=False) == Expectation.PASS

    @pytest.mark.parametrize("name", ["stationarity", "poho_s1", "poho_s1_first"])
    def test_sentinels_fail_on_controls(self, name):
        assert circle_expectation(report(name), negative=True) == Expectation.FAIL

    def test_consistency_passes_on_controls(self):
        assert circle_expectation(report("pohozaev_series"), negative=True) == Expectation.PASS

    def test_relation_orders(self):
        assert circle_expectation(report("fourier_relation", n=2), True) == Expectation.FAIL
        assert circle_expectation(report("fourier_relation", n=3), True) == Expectation.ANY
        assert circle_expectation(
            report("low_order_relation", relation="n2_norm"), True) == Expectation.FAIL

    def test_rotated_relation(self):
        assert circle_expectation(report("fourier_relation_alpha", n=2, alpha=0.0), True) \
            == Expectation.FAIL
        assert circle_expectation(report("fourier_relation_alpha", n=2, alpha=0.7), True) \
            == Expectation.ANY

    def test_planar(self):
        hyp = report("hypothesis_residual")
        assert planar_expectation(hyp, negative=True) == Expectation.FAIL
        assert planar_expectation(hyp, negative=False) == Expectation.PASS
        ball = report("ball_pohozaev")
        assert planar_expectation(ball, negative=False, control=True) == Expectation.FAIL
        assert planar_expectation(ball, negative=True) == Expectation.ANY

    def test_as_expected(self):
        failing = report("stationarity", passed=False).with_params(expect=Expectation.FAIL.value)
        assert failing.as_expected
        assert not report("stationarity", passed=False).as_expected

    def test_expectation_read_from_params(self):
        assert report("poho_s1").expectation is Expectation.PASS
        labelled = report("poho_s1").with_params(expect="any")
        assert labelled.expectation is Expectation.ANY
        assert labelled.as_expected
        with pytest.raises(ValueError):
            report("poho_s1", expect="maybe").expectation


class TestPresets:

    def test_builtin_presets(self):
        manager = PresetManager(get_suites_path())
        assert {"default", "quick"} <= set(manager.get_preset_names())
        assert manager.get_preset("quick").description

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            get_preset_manager().load_suite("nope")

    def test_default_preset_parses(self):
        config = get_preset_manager().load_suite("default")
        assert "identity" in config.maps
        assert config.grid == 1024


@pytest.fixture(scope="module")
def quick_config():
    return get_preset_manager().load_suite("quick")


@pytest.fixture(scope="module")
def quick_results(quick_config):
    return run_suite(quick_config)


class TestRunner:

    def test_quick_suite_as_expected(self, quick_results):
        assert not quick_results['failed']
        assert not quick_results['cancelled']
        assert not quick_results['unexpected'], \
            [(r.identity_name, r.params.get('map'), r.rel_gap) for r in quick_results['unexpected']]
        assert quick_results['success']

    def test_controls_fail(self, quick_results):
        names = {(r.identity_name, r.params.get('map')): r for r in quick_results['reports']}
        assert not names[("stationarity", "negctrl:1")].passed
        assert not names[("hypothesis_residual", "broken:1")].passed

    def test_every_report_labelled(self, quick_results):
        labels = {r.params['expect'] for r in quick_results['reports']}
        assert labels <= {e.value for e in Expectation}
        assert Expectation.FAIL.value in labels

    def test_deterministic(self, quick_config, quick_results):
        again = run_suite(quick_config)
        exporter = Exporter()
        assert exporter.reports_to_json(again['reports']) == \
            exporter.reports_to_json(quick_results['reports'])

    def test_thread_pool_matches_serial(self):
        config = parse_suite("[suite]\nmaps = identity, negctrl:1, holo:z2\ngrid = 128\n"
                             "t_grid = 1.0\nline_t = 1.0\nn_max = 4\nmobius = 0:0.3\n"
                             "mobius_n_max = 3\ncovariance_grid = 512\nradii = 1.0\n"
                             "planar_t = 1.0\ncentres = 0,0\nfields = z\ncontrol_maps =\n"
                             "oracle_maps =\n")
        serial = run_suite(config)
        config.jobs = 3
        pooled = run_suite(config)
        exporter = Exporter()
        assert exporter.reports_to_json(pooled['reports']) == exporter.reports_to_json(serial['reports'])

    def test_progress_and_cancel(self, quick_config):
        runner = SuiteRunner(quick_config)
        seen = []

        def progress(current, total, message):
            seen.append(current)
            runner.cancel()

        runner.set_progress_callback(progress)
        results = runner.run()
        assert seen == [1]
        assert results['cancelled']
        assert not results['success']
