"""
Verification Suite
Suite configuration read from INI files and the batch runner that applies
every applicable verifier to each map and labels the expected verdicts.
"""

import configparser
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields as dataclass_fields
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.conformal import MobiusDisk, mobius_covariance_residual, pullback_halflap_check
from core.identities.circle import (
    DEFAULT_LINE_T_GRID, DEFAULT_T_GRID, FourierData, el_residual_report,
    fourier_relation_alpha, fourier_relations, low_order_relations,
    mobius_invariance_suite, poho_r, poho_r_oracle, poho_s1, poho_s1_first,
    pohozaev_series, stationarity_report,
)
from core.identities.planar import (
    ConjugateField, HoloField, QuadratureConfig, ball_pohozaev, ball_pohozaev_normal,
    ball_pohozaev_radial, cauchy_riemann_report, gaussian_pohozaev, hypothesis_report,
    is_radial_field, radial_field,
)
from core.kernels import kernel_agreement
from core.report import Expectation, IdentityReport
from core.zoo.circle_maps import CircleMap, ZooError
from core.zoo.planar_maps import PlanarMap, PlanarMapKind
from core.zoo.registry import (
    ZooMap, build_inline_map, is_negative_control, parse_polynomial, resolve_map,
)
from utils.debug_log import debug_log


DEFAULT_MAPS = (
    "identity", "blaschke:0.5", "blaschke:0.3,-0.2", "blaschke:0.5+0.2j",
    "negctrl:1", "negctrl:2", "const:1,0",
    "holo:z", "holo:z2", "holo:z3", "holoreal:z2", "holoreal:z",
    "s2:z", "s2:z2", "broken:1",
)

# Identities that fail on the negative controls
SENTINELS = ("stationarity", "el_residual_sphere", "poho_s1", "poho_s1_first")

# Identities that hold for every smooth input, negative controls included
CONSISTENCY = ("pohozaev_series", "mobius_covariance", "kernel_agreement",
               "pullback_halflap", "poho_r_oracle")

KERNEL_CASE = "kernels"
FIELD_CASE = "fields"


class ConfigError(ValueError):
    """Malformed suite file, unknown map id or invalid setting."""


@dataclass
class Tolerances:
    """Relative tolerance per identity."""
    stationarity: float = 1e-10
    el_residual: float = 1e-9
    poho_s1: float = 1e-8
    poho_s1_first: float = 1e-10
    fourier: float = 1e-10
    low_order: float = 1e-12
    poho_r: float = 1e-6
    oracle: float = 1e-8
    pullback: float = 1e-8
    covariance: float = 1e-8
    mobius: float = 1e-8
    series: float = 1e-8
    kernel: float = 1e-12
    ball: float = 1e-10
    gaussian: float = 1e-8
    hypothesis: float = 1e-6

    def with_all(self, tol: float) -> 'Tolerances':
        """Copy with every tolerance set to tol (the --tol override)."""
        return Tolerances(**{f.name: float(tol) for f in dataclass_fields(self)})

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'Tolerances':
        known = {f.name for f in dataclass_fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {', '.join(sorted(unknown))}")
        try:
            return cls(**{k: float(v) for k, v in data.items()})
        except ValueError as e:
            raise ConfigError(f"bad tolerance value: {e}") from None


@dataclass
class SuiteConfig:
    """Everything a verification run needs."""
    name: str = "default"
    maps: List[str] = field(default_factory=lambda: list(DEFAULT_MAPS))
    inline_maps: Dict[str, Dict[str, str]] = field(default_factory=dict)
    grid: int = 1024
    t_grid: List[float] = field(default_factory=lambda: list(DEFAULT_T_GRID))
    line_t: List[float] = field(default_factory=lambda: list(DEFAULT_LINE_T_GRID))
    n_max: int = 10
    mobius: List[MobiusDisk] = field(default_factory=lambda: [
        MobiusDisk(0.0, 0.3), MobiusDisk(0.0, 0.5), MobiusDisk(0.3, 0.3), MobiusDisk(0.3, 0.5),
    ])
    mobius_n_max: int = 8
    covariance_grid: int = 2048
    radii: List[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    planar_t: List[float] = field(default_factory=lambda: [0.5, 1.0])
    centres: List[Tuple[float, float]] = field(default_factory=lambda: [(0.0, 0.0), (0.2, -0.1)])
    fields: List[str] = field(default_factory=lambda: ["1", "z", "z2"])
    control_fields: List[str] = field(default_factory=lambda: ["z"])
    control_maps: List[str] = field(default_factory=lambda: ["holoreal:z"])
    oracle_maps: List[str] = field(default_factory=lambda: ["identity"])
    out: str = "pohocheck_report.json"
    jobs: int = 1
    seed: int = 42
    tolerances: Tolerances = field(default_factory=Tolerances)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'maps': list(self.maps),
            'inline_maps': {k: dict(v) for k, v in self.inline_maps.items()},
            'grid': self.grid,
            't_grid': list(self.t_grid),
            'line_t': list(self.line_t),
            'n_max': self.n_max,
            'mobius': [M.to_dict() for M in self.mobius],
            'mobius_n_max': self.mobius_n_max,
            'covariance_grid': self.covariance_grid,
            'radii': list(self.radii),
            'planar_t': list(self.planar_t),
            'centres': [list(c) for c in self.centres],
            'fields': list(self.fields),
            'control_fields': list(self.control_fields),
            'control_maps': list(self.control_maps),
            'oracle_maps': list(self.oracle_maps),
            'out': self.out,
            'jobs': self.jobs,
            'seed': self.seed,
            'tolerances': self.tolerances.to_dict(),
            'quadrature': self.quadrature.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'SuiteConfig':
        defaults = cls()
        return cls(
            name=data.get('name', defaults.name),
            maps=list(data.get('maps', defaults.maps)),
            inline_maps={k: dict(v) for k, v in data.get('inline_maps', {}).items()},
            grid=int(data.get('grid', defaults.grid)),
            t_grid=[float(t) for t in data.get('t_grid', defaults.t_grid)],
            line_t=[float(t) for t in data.get('line_t', defaults.line_t)],
            n_max=int(data.get('n_max', defaults.n_max)),
            mobius=[MobiusDisk.from_dict(m) for m in data['mobius']] if 'mobius' in data
            else defaults.mobius,
            mobius_n_max=int(data.get('mobius_n_max', defaults.mobius_n_max)),
            covariance_grid=int(data.get('covariance_grid', defaults.covariance_grid)),
            radii=[float(r) for r in data.get('radii', defaults.radii)],
            planar_t=[float(t) for t in data.get('planar_t', defaults.planar_t)],
            centres=[(float(c[0]), float(c[1])) for c in data.get('centres', defaults.centres)],
            fields=list(data.get('fields', defaults.fields)),
            control_fields=list(data.get('control_fields', defaults.control_fields)),
            control_maps=list(data.get('control_maps', defaults.control_maps)),
            oracle_maps=list(data.get('oracle_maps', defaults.oracle_maps)),
            out=data.get('out', defaults.out),
            jobs=int(data.get('jobs', defaults.jobs)),
            seed=int(data.get('seed', defaults.seed)),
            tolerances=Tolerances.from_dict(data.get('tolerances', {})),
            quadrature=QuadratureConfig.from_dict(data.get('quadrature', {})),
        )


# ---------------------------------------------------------------------------
# Suite files
# ---------------------------------------------------------------------------

def _split(text: str, sep: str = ',') -> List[str]:
    return [item.strip() for item in text.split(sep) if item.strip()]


# a comma starts a new id only when a name follows; "blaschke:0.3,-0.2" stays whole
_ID_SEPARATOR = re.compile(r",\s*(?=[A-Za-z_][\w-]*\s*(?::|,|\Z))")


def split_map_ids(text: str) -> List[str]:
    return [item.strip() for item in _ID_SEPARATOR.split(text.strip()) if item.strip()]


def _floats(text: str) -> List[float]:
    try:
        return [float(item) for item in _split(text)]
    except ValueError:
        raise ConfigError(f"expected a list of numbers, got {text!r}") from None


def parse_mobius_list(text: str) -> List[MobiusDisk]:
    """'0:0.3; 0.3:0.5+0.2j' -> Möbius maps with (alpha, a)."""
    out = []
    for entry in _split(text, ';'):
        alpha_text, sep, a_text = entry.partition(':')
        if not sep:
            raise ConfigError(f"Möbius entry {entry!r} must read alpha:a")
        try:
            out.append(MobiusDisk(float(alpha_text), complex(a_text.strip().replace(' ', ''))))
        except ValueError as e:
            raise ConfigError(f"bad Möbius entry {entry!r}: {e}") from None
    return out


def _centres(text: str) -> List[Tuple[float, float]]:
    out = []
    for entry in _split(text, ';'):
        values = _floats(entry)
        if len(values) != 2:
            raise ConfigError(f"centre {entry!r} needs two coordinates")
        out.append((values[0], values[1]))
    return out


_LIST_KEYS = {
    'maps': split_map_ids, 'fields': _split, 'control_fields': _split,
    'control_maps': split_map_ids, 'oracle_maps': split_map_ids,
    't_grid': _floats, 'line_t': _floats, 'radii': _floats, 'planar_t': _floats,
}


def parse_suite(text: str, source: str = "<string>") -> SuiteConfig:
    """
    Parse suite text.

    Sections: [suite] global keys, [tolerances] per-identity tolerances,
    [quadrature] planar quadrature settings and [map:<name>] inline maps.

    Raises:
        ConfigError: on syntax errors, unknown keys or unknown map ids.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as e:
        raise ConfigError(f"{source}: {e}") from None

    data: Dict[str, Any] = {}
    if parser.has_section('suite'):
        for key, value in parser.items('suite'):
            if key in _LIST_KEYS:
                data[key] = _LIST_KEYS[key](value)
            elif key == 'mobius':
                data['mobius'] = [M.to_dict() for M in parse_mobius_list(value)]
            elif key == 'centres':
                data['centres'] = _centres(value)
            elif key in ('name', 'out'):
                data[key] = value
            elif key in ('grid', 'n_max', 'mobius_n_max', 'covariance_grid', 'jobs', 'seed'):
                try:
                    data[key] = int(value)
                except ValueError:
                    raise ConfigError(f"{source}: {key} must be an integer, got {value!r}") from None
            else:
                raise ConfigError(f"{source}: unknown key {key!r} in [suite]")

    if parser.has_section('tolerances'):
        data['tolerances'] = dict(parser.items('tolerances'))
    if parser.has_section('quadrature'):
        data['quadrature'] = dict(parser.items('quadrature'))

    inline = {}
    for section in parser.sections():
        if section.startswith('map:'):
            inline[section[4:].strip()] = dict(parser.items(section))
        elif section not in ('suite', 'tolerances', 'quadrature'):
            raise ConfigError(f"{source}: unknown section [{section}]")
    data['inline_maps'] = inline

    try:
        config = SuiteConfig.from_dict(data)
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"{source}: {e}") from None

    resolve_suite_maps(config)
    return config


def load_suite(path: Union[str, Path]) -> SuiteConfig:
    """Read a suite file from disk."""
    path = Path(path)
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigError(f"cannot read suite file {path}: {e}") from None
    debug_log.info(f"Loading suite file: {path}")
    return parse_suite(text, source=str(path))


def resolve_suite_maps(config: SuiteConfig) -> Dict[str, ZooMap]:
    """Build every map of the suite; unknown ids are configuration errors."""
    if config.grid < 4 or config.grid & (config.grid - 1):
        raise ConfigError(f"grid must be a power of two >= 4, got {config.grid}")
    if config.jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {config.jobs}")

    maps: Dict[str, ZooMap] = {}
    for map_id in config.maps:
        try:
            if map_id in config.inline_maps:
                maps[map_id] = build_inline_map(map_id, config.inline_maps[map_id])
            else:
                maps[map_id] = resolve_map(map_id)
        except ZooError as e:
            raise ConfigError(str(e)) from None

    for key in ('control_maps', 'oracle_maps'):
        for map_id in getattr(config, key):
            if map_id not in maps:
                debug_log.warning(f"{key} entry {map_id!r} is not among the suite maps; ignored")
    for text in config.fields + config.control_fields:
        try:
            parse_polynomial(text)
        except ZooError as e:
            raise ConfigError(f"bad vector field {text!r}: {e}") from None
    return maps


# ---------------------------------------------------------------------------
# Expectations
# ---------------------------------------------------------------------------

def circle_expectation(report: IdentityReport, negative: bool) -> Expectation:
    """Expected verdict of a circle-map report."""
    name = report.identity_name
    if not negative or name in CONSISTENCY:
        return Expectation.PASS
    if name in SENTINELS:
        return Expectation.FAIL
    params = report.params
    if name == "fourier_relation" and params.get('n') == 2:
        return Expectation.FAIL
    if name == "low_order_relation" and params.get('relation') == "n2_norm":
        return Expectation.FAIL
    if (name == "fourier_relation_alpha" and params.get('n') == 2
            and abs(np.cos(2 * params.get('alpha', 0.0))) > 0.5):
        return Expectation.FAIL
    return Expectation.ANY


def planar_expectation(report: IdentityReport, negative: bool,
                       control: bool = False) -> Expectation:
    """Expected verdict of a planar report; control marks anti-holomorphic fields."""
    if report.identity_name == "hypothesis_residual":
        return Expectation.FAIL if negative else Expectation.PASS
    if negative:
        return Expectation.ANY
    return Expectation.FAIL if control else Expectation.PASS


def _labelled(reports: Sequence[IdentityReport], expect: Callable[[IdentityReport], Expectation]):
    return [r.with_params(expect=expect(r).value) for r in reports]


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------

@dataclass
class SuiteCase:
    """One unit of work: a map or the kernel checks."""
    case_id: str
    target: Optional[ZooMap] = None


class SuiteRunner:
    """
    Runs a verification suite case by case.

    Cases are independent and may run on a thread pool; the report list is
    sorted afterwards, so the output does not depend on scheduling.
    """

    def __init__(self, config: SuiteConfig):
        self.config = config
        self._maps = resolve_suite_maps(config)
        self._progress_callback: Optional[Callable[[int, int, str], None]] = None
        self._cancel_requested = False

    def set_progress_callback(self, callback: Callable[[int, int, str], None]):
        """Set callback for progress updates: (current, total, message)."""
        self._progress_callback = callback

    def cancel(self):
        """Request cancellation; cases not yet started are skipped."""
        self._cancel_requested = True

    def build_cases(self) -> List[SuiteCase]:
        cases = [SuiteCase(KERNEL_CASE), SuiteCase(FIELD_CASE)]
        cases.extend(SuiteCase(map_id, target) for map_id, target in self._maps.items())
        return cases

    def run(self) -> Dict[str, Any]:
        """
        Run all cases.

        Returns:
            Dictionary with results: {
                'success': bool,
                'reports': List[IdentityReport],   # sorted
                'failed': List[tuple],             # (case id, error)
                'unexpected': List[IdentityReport],
                'cancelled': bool
            }
        """
        self._cancel_requested = False
        cases = self.build_cases()
        total = len(cases)
        done = [0]
        lock = threading.Lock()

        def work(case: SuiteCase):
            if self._cancel_requested:
                return case, None, "cancelled"
            try:
                reports = self.run_case(case)
                error = None
            except Exception as e:
                debug_log.exception(f"Suite case {case.case_id} failed")
                reports, error = [], f"{type(e).__name__}: {e}"
            with lock:
                done[0] += 1
                if self._progress_callback:
                    self._progress_callback(done[0], total, f"Verified: {case.case_id}")
            return case, reports, error

        debug_log.info(f"Running suite '{self.config.name}': {total} cases, jobs={self.config.jobs}")
        if self.config.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.config.jobs) as pool:
                outcomes = list(pool.map(work, cases))
        else:
            outcomes = [work(case) for case in cases]

        results: Dict[str, Any] = {
            'success': True,
            'reports': [],
            'failed': [],
            'unexpected': [],
            'cancelled': self._cancel_requested,
        }
        for case, reports, error in outcomes:
            if error is not None:
                results['failed'].append((case.case_id, error))
                continue
            results['reports'].extend(reports)

        results['reports'].sort(key=IdentityReport.sort_key)
        results['unexpected'] = [r for r in results['reports'] if not r.as_expected]
        results['success'] = not (results['failed'] or results['unexpected'] or results['cancelled'])
        debug_log.info(f"Suite done: {len(results['reports'])} reports, "
                       f"{len(results['unexpected'])} unexpected, {len(results['failed'])} failed")
        return results

    def run_case(self, case: SuiteCase) -> List[IdentityReport]:
        if case.case_id == KERNEL_CASE:
            return self._kernel_reports()
        if case.case_id == FIELD_CASE:
            return self._field_reports()
        if isinstance(case.target, CircleMap):
            return self._circle_reports(case.case_id, case.target)
        return self._planar_reports(case.case_id, case.target)

    # -- cases -------------------------------------------------------------

    def _kernel_reports(self) -> List[IdentityReport]:
        tol = self.config.tolerances
        reports = [kernel_agreement(t, tol=tol.kernel) for t in self.config.t_grid]
        reports += [pullback_halflap_check(t, self.config.covariance_grid, tol=tol.pullback)
                    for t in self.config.line_t]
        return _labelled(reports, lambda r: Expectation.PASS)

    def _field_reports(self) -> List[IdentityReport]:
        tol = self.config.tolerances.hypothesis
        seed = self.config.seed
        reports = [cauchy_riemann_report(self._field(text), seed, tol=tol)
                   for text in self.config.fields]
        reports += [cauchy_riemann_report(self._field(text, conjugate=True), seed, tol=tol)
                    for text in self.config.control_fields]
        return _labelled(reports, lambda r: Expectation.FAIL if r.params["field"].startswith("conj:")
                         else Expectation.PASS)

    @staticmethod
    def _field(text: str, conjugate: bool = False) -> HoloField:
        if conjugate:
            return ConjugateField(parse_polynomial(text), name=f"conj:{text}")
        return HoloField(parse_polynomial(text), name=text)

    def _circle_reports(self, map_id: str, cmap: CircleMap) -> List[IdentityReport]:
        cfg = self.config
        tol = cfg.tolerances
        negative = cmap.negative_control or is_negative_control(map_id)
        u = cmap.grid(cfg.grid)
        data = FourierData.from_map(u)

        reports = [stationarity_report(u, tol.stationarity, map_id)]
        if u.sphere_valued:
            reports.append(el_residual_report(u, tol.el_residual, map_id))
        reports += poho_s1(u, cfg.t_grid, tol=tol.poho_s1, map_id=map_id)
        reports.append(poho_s1_first(u, tol.poho_s1_first, map_id))
        reports += [rel.report for rel in fourier_relations(u, cfg.n_max, tol.fourier, map_id, data)]
        reports += low_order_relations(u, tol.low_order, map_id, data)
        reports += [pohozaev_series(u, t, tol.series, map_id, data) for t in cfg.t_grid]

        for alpha in sorted({M.alpha for M in cfg.mobius}):
            reports += [fourier_relation_alpha(u, n, alpha, tol.fourier, map_id, data)
                        for n in range(2, cfg.n_max + 1)]

        if u.sphere_valued:
            for M in cfg.mobius:
                reports += mobius_invariance_suite(u, M, cfg.mobius_n_max, tol.mobius, map_id)
        # covariance runs on the rotation-free entries only
        rotation_free = [M for M in cfg.mobius if M.alpha == 0.0]
        if rotation_free:
            v = cmap.grid(cfg.covariance_grid)
            reports += [mobius_covariance_residual(v, M, tol.covariance, map_id) for M in rotation_free]

        reports += poho_r(u, t_grid=cfg.line_t, tol=tol.poho_r, map_id=map_id)
        if map_id in cfg.oracle_maps:
            reports += poho_r_oracle(u, cmap.value_at, t_grid=cfg.line_t, tol=tol.oracle,
                                     map_id=map_id)

        return _labelled(reports, lambda r: circle_expectation(r, negative))

    def _planar_reports(self, map_id: str, pmap: PlanarMap) -> List[IdentityReport]:
        cfg = self.config
        tol = cfg.tolerances
        quad = cfg.quadrature
        negative = is_negative_control(map_id) or pmap.kind is PlanarMapKind.GENERIC
        holo_fields = [self._field(text) for text in cfg.fields]
        controls = [self._field(text, conjugate=True)
                    for text in cfg.control_fields] if map_id in cfg.control_maps else []

        def expect(r):
            return planar_expectation(r, negative, str(r.params.get('field', '')).startswith('conj:'))

        reports = [hypothesis_report(pmap, tol=tol.hypothesis, map_id=map_id)]
        for centre in cfg.centres:
            for r in cfg.radii:
                reports.append(ball_pohozaev_radial(pmap, centre, r, tol.ball, quad, map_id))
                reports.append(ball_pohozaev_normal(pmap, centre, r, tol.ball, quad, map_id))
                for X in holo_fields + controls:
                    reports.append(ball_pohozaev(pmap, centre, r, X, tol.ball, quad, map_id))

            gauss_fields = list(holo_fields)
            if not any(is_radial_field(X, centre) for X in gauss_fields):
                gauss_fields.append(radial_field(centre))
            for t in cfg.planar_t:
                for X in gauss_fields:
                    reports += gaussian_pohozaev(pmap, centre, t, X, tol.gaussian, quad, map_id)

        return _labelled(reports, expect)


def run_suite(config: SuiteConfig,
              progress: Optional[Callable[[int, int, str], None]] = None) -> Dict[str, Any]:
    """Convenience wrapper around SuiteRunner."""
    runner = SuiteRunner(config)
    if progress:
        runner.set_progress_callback(progress)
    return runner.run()
