"""Scenario files: strict JSON with defaults for every parameter.

An empty object ``{}`` resolves to the carbon-fiber TCAM / silicone arm
case study. Any key not known to the schema is rejected with its line.
"""

from dataclasses import asdict, dataclass, field, fields, replace
import hashlib
import json
import math

from .errors import ModelDomainError
from .loads import FluidParams, TcamLayout, TcamSegment
from .rod import MaterialParams, RodGeometry
from .solver import ArmScenario, SolverSettings
from .tcam import DEFAULT_REF_TEMP_EXCESS, TcamParams, linearization_coefficient

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """Invalid scenario input; ``key`` and ``line`` locate the problem when known."""

    def __init__(self, message, key=None, line=None):
        where = [f"key '{key}'"] if key is not None else []
        if line is not None:
            where.append(f"line {line}")
        super().__init__(message + (f" [{', '.join(where)}]" if where else ""))
        self.key = key
        self.line = line


@dataclass(frozen=True)
class Waveform:
    shape: str = "sine"
    amplitude_V: float = 9.0
    angular_frequency_radps: float = 1.0
    duration_s: float = 2.0 * math.pi
    dt_s: float = 1e-3

    def __post_init__(self):
        if self.shape not in ("sine", "constant"):
            raise ModelDomainError("waveform.shape must be 'sine' or 'constant'")
        if not (self.dt_s > 0 and self.duration_s >= self.dt_s):
            raise ModelDomainError("waveform needs dt_s > 0 and duration_s >= dt_s")

    def voltage(self, t):
        if self.shape == "constant":
            return self.amplitude_V
        return self.amplitude_V * math.sin(self.angular_frequency_radps * t)


@dataclass(frozen=True)
class TcamSection:
    params: TcamParams = field(default_factory=TcamParams)
    waveform: Waveform = field(default_factory=Waveform)
    ref_temp_excess_C: float = DEFAULT_REF_TEMP_EXCESS
    c_lin_N_per_C: float = None

    def c_lin(self):
        """``(value, source)``; derived from the coil model unless overridden."""
        if self.c_lin_N_per_C is not None:
            return self.c_lin_N_per_C, "override"
        return linearization_coefficient(self.params, self.ref_temp_excess_C), "coil model"


@dataclass(frozen=True)
class SweepSpec:
    t11_min: float = 0.0
    t11_max: float = 20.0
    step: float = 0.5
    t12: float = 0.0
    profile_tensions: tuple = (0.0, 5.0, 10.0, 15.0, 20.0)

    def __post_init__(self):
        object.__setattr__(self, "profile_tensions", tuple(float(t) for t in self.profile_tensions))
        if not self.step > 0:
            raise ModelDomainError("sweep.step must be > 0")
        if self.t11_max < self.t11_min or self.t11_min < 0:
            raise ModelDomainError("sweep needs 0 <= t11_min <= t11_max")
        if self.t12 < 0:
            raise ModelDomainError("sweep.t12 must be >= 0")


@dataclass(frozen=True)
class Toggles:
    gravity: bool = True
    fluid: bool = True


@dataclass(frozen=True)
class ScenarioFile:
    schema_version: int = SCHEMA_VERSION
    tcam: TcamSection = field(default_factory=TcamSection)
    geometry: RodGeometry = field(default_factory=RodGeometry)
    material: MaterialParams = field(default_factory=MaterialParams)
    layout: TcamLayout = field(default_factory=TcamLayout.single)
    fluid: FluidParams = field(default_factory=FluidParams)
    solver: SolverSettings = field(default_factory=SolverSettings)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    toggles: Toggles = field(default_factory=Toggles)

    def arm(self):
        return ArmScenario(
            geometry=replace(self.geometry, node_count=self.solver.node_count),
            material=self.material,
            layout=self.layout,
            fluid=self.fluid,
            solver=self.solver,
            gravity=self.toggles.gravity,
            include_fluid=self.toggles.fluid,
            t12=self.sweep.t12,
        )

    def with_grid(self, node_count):
        return replace(
            self,
            solver=replace(self.solver, node_count=node_count),
            geometry=replace(self.geometry, node_count=node_count),
        )

    def resolved(self):
        """Plain-data echo of every parameter (JSON serialisable)."""
        out = {
            "schema_version": self.schema_version,
            "tcam": {
                **asdict(self.tcam.params),
                "waveform": asdict(self.tcam.waveform),
                "ref_temp_excess_C": self.tcam.ref_temp_excess_C,
                "c_lin_N_per_C": self.tcam.c_lin_N_per_C,
            },
            "rod": {**asdict(self.geometry), **asdict(self.material)},
            "layout": {"segments": [asdict(seg) for seg in self.layout.segments]},
            "fluid": {**asdict(self.fluid), "hydrostatic_mode": self.fluid.hydrostatic_mode.value},
            "solver": asdict(self.solver),
            "sweep": {**asdict(self.sweep), "profile_tensions": list(self.sweep.profile_tensions)},
            "toggles": asdict(self.toggles),
        }
        return out

    def content_hash(self):
        """Git blob hash of the canonical resolved parameters."""
        body = json.dumps(self.resolved(), sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()


def _line_of(text, key):
    needle = f'"{key}"'
    for lineno, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return lineno
    return None


def _build(cls, data, section, text, exclude=(), rename=None):
    """Instantiate dataclass ``cls`` from ``data`` rejecting unknown keys."""
    rename = rename or {}
    if not isinstance(data, dict):
        raise ScenarioError(f"section '{section}' must be an object", key=section, line=_line_of(text, section))
    known = {f.name for f in fields(cls)} - set(exclude)
    kwargs = {}
    for key, value in data.items():
        target = rename.get(key, key)
        if target not in known:
            raise ScenarioError(f"unknown key in '{section}'", key=f"{section}.{key}", line=_line_of(text, key))
        kwargs[target] = value
    try:
        return cls(**kwargs)
    except (ModelDomainError, ValueError, TypeError) as exc:
        culprit = next((k for k in data if k in str(exc)), next(iter(data), None))
        key = f"{section}.{culprit}" if culprit else section
        raise ScenarioError(f"invalid value: {exc}", key=key, line=_line_of(text, culprit or section)) from exc


_SECTIONS = ("schema_version", "tcam", "rod", "layout", "fluid", "solver", "sweep", "toggles")


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise ScenarioError("duplicate key", key=key)
        out[key] = value
    return out


def _reject_constant(name):
    raise ScenarioError(f"non-finite number {name} is not allowed")


def parse_scenario_text(text):
    """Parse scenario JSON text; an empty document means all defaults."""
    try:
        data = (
            json.loads(text, object_pairs_hook=_no_duplicates, parse_constant=_reject_constant)
            if text.strip()
            else {}
        )
    except ScenarioError as exc:
        if exc.key is not None:
            raise ScenarioError("duplicate key", key=exc.key, line=_line_of(text, exc.key)) from None
        raise
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed JSON: {exc.msg}", line=exc.lineno) from exc
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object", line=1)
    for key in data:
        if key not in _SECTIONS:
            raise ScenarioError("unknown top-level key", key=key, line=_line_of(text, key))

    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ScenarioError(
            f"unsupported schema_version {version!r}", key="schema_version", line=_line_of(text, "schema_version")
        )

    tcam_data = dict(data.get("tcam", {}))
    waveform = _build(Waveform, tcam_data.pop("waveform", {}), "tcam.waveform", text)
    extras = {k: tcam_data.pop(k) for k in ("ref_temp_excess_C", "c_lin_N_per_C") if k in tcam_data}
    params = _build(TcamParams, tcam_data, "tcam", text)
    tcam = _build(TcamSection, {**extras, "params": params, "waveform": waveform}, "tcam", text)

    rod_data = dict(data.get("rod", {}))
    geo_keys = {f.name for f in fields(RodGeometry)}
    mat_keys = {f.name for f in fields(MaterialParams)}
    for key in rod_data:
        if key not in geo_keys | mat_keys:
            raise ScenarioError("unknown key in 'rod'", key=f"rod.{key}", line=_line_of(text, key))
    geometry = _build(RodGeometry, {k: v for k, v in rod_data.items() if k in geo_keys}, "rod", text)
    material = _build(MaterialParams, {k: v for k, v in rod_data.items() if k in mat_keys}, "rod", text)

    layout_data = data.get("layout", {})
    if not isinstance(layout_data, dict) or set(layout_data) - {"segments"}:
        bad = next(iter(set(layout_data) - {"segments"}), "layout") if isinstance(layout_data, dict) else "layout"
        raise ScenarioError("unknown key in 'layout'", key=f"layout.{bad}", line=_line_of(text, bad))
    seg_list = layout_data.get("segments", [{"length_m": geometry.length_m}])
    segments = [
        _build(TcamSegment, {"length_m": geometry.length_m, **seg} if len(seg_list) == 1 else seg, "layout.segments", text)
        for seg in seg_list
    ]
    layout = TcamLayout(tuple(segments))

    fluid = _build(FluidParams, data.get("fluid", {}), "fluid", text)
    solver_data = dict(data.get("solver", {}))
    solver_data.setdefault("node_count", geometry.node_count)
    solver = _build(SolverSettings, solver_data, "solver", text)
    sweep = _build(SweepSpec, data.get("sweep", {}), "sweep", text)
    toggles = _build(Toggles, data.get("toggles", {}), "toggles", text)

    scen = ScenarioFile(version, tcam, replace(geometry, node_count=solver.node_count), material,
                        layout, fluid, solver, sweep, toggles)
    try:
        layout.validate(scen.geometry)
    except ModelDomainError as exc:
        raise ScenarioError(str(exc), key="layout", line=_line_of(text, "layout")) from exc
    return scen


def parse_scenario(path):
    """Read and strictly validate a scenario file; missing keys take defaults."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from exc
    return parse_scenario_text(text)
