"""Scenario files: strict schema, YAML syntax, radians-only angles.

Unknown keys are rejected (fail-closed) and every validation message names
the offending field.  Angles are plain numbers in radians; the string form
"deg:30" converts from degrees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .chain import ChainSpec, PartySettings, mub_sharp_pair, mub_unsharp_pair
from .linalg import BlochDirection
from .measurement import SharpSetting, UnsharpSetting
from .states import PureTwoQubitState, bell_state, tilted_state

MODES = ("chain", "plan", "unbounded")
SETTINGS_MODELS = ("mub", "explicit")
OUTPUT_FORMATS = ("csv", "json")
MAX_UNBOUNDED_DEPTH = 12


class ScenarioError(ValueError):
    """Scenario schema violation; the message names the offending field."""


def parse_angle(value: object, field_name: str) -> float:
    """Radians from a number, or from a 'deg:<x>' string."""
    if isinstance(value, str):
        if not value.startswith("deg:"):
            raise ScenarioError(
                f"{field_name}: angles are radians or 'deg:<value>', got {value!r}"
            )
        try:
            degrees = float(value[4:])
        except ValueError:
            raise ScenarioError(f"{field_name}: cannot parse degrees in {value!r}")
        value = math.radians(degrees)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ScenarioError(f"{field_name}: expected an angle, got {value!r}")
    angle = float(value)
    if not math.isfinite(angle):
        raise ScenarioError(f"{field_name}: angle must be finite")
    return angle


def parse_angle_token(token: str, field_name: str) -> float:
    """Angle from a command-line token: plain radians or 'deg:<x>'."""
    try:
        value = float(token)
    except ValueError:
        return parse_angle(token, field_name)
    return parse_angle(value, field_name)


def _require_mapping(value: object, field_name: str) -> dict:
    if not isinstance(value, dict):
        raise ScenarioError(f"{field_name}: expected a mapping")
    return value


def _check_keys(mapping: dict, allowed: set[str], field_name: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    if unknown:
        raise ScenarioError(f"{field_name}.{unknown[0]}: unknown key")


def _number(value: object, field_name: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ScenarioError(f"{field_name}: expected a number, got {value!r}")
    out = float(value)
    if not math.isfinite(out):
        raise ScenarioError(f"{field_name}: value must be finite")
    return out


@dataclass(frozen=True)
class StateSpec:
    kind: str
    theta: float | None = None

    def build(self) -> PureTwoQubitState:
        if self.kind == "bell":
            return bell_state()
        assert self.theta is not None
        return tilted_state(self.theta)


@dataclass(frozen=True)
class PartySpec:
    """Measurement settings declaration for Alice or Bob."""

    settings: str = "mub"
    directions: tuple[BlochDirection, BlochDirection] | None = None

    def build(self) -> PartySettings:
        if self.settings == "mub":
            return mub_sharp_pair()
        assert self.directions is not None
        return PartySettings(
            SharpSetting(self.directions[0]), SharpSetting(self.directions[1])
        )


@dataclass(frozen=True)
class EveSpec:
    sharpness: float
    settings: str = "mub"
    directions: tuple[BlochDirection, BlochDirection] | None = None
    bias: float = 0.5

    def build(self) -> PartySettings:
        if self.settings == "mub":
            return mub_unsharp_pair(self.sharpness)
        assert self.directions is not None
        return PartySettings(
            UnsharpSetting(self.directions[0], self.sharpness),
            UnsharpSetting(self.directions[1], self.sharpness),
        )


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None


@dataclass(frozen=True)
class Scenario:
    mode: str
    state: StateSpec = StateSpec("bell")
    alice: PartySpec = PartySpec()
    bob: PartySpec = PartySpec()
    eves: tuple[EveSpec, ...] = ()
    targets: tuple[float, ...] = ()
    theta1: float | None = None
    weak_lambdas: tuple[float, ...] = ()
    output: OutputSpec = field(default_factory=OutputSpec)


def _parse_direction(raw: object, field_name: str) -> BlochDirection:
    mapping = _require_mapping(raw, field_name)
    _check_keys(mapping, {"theta", "phi"}, field_name)
    if "theta" not in mapping:
        raise ScenarioError(f"{field_name}.theta: required key is missing")
    theta = parse_angle(mapping["theta"], f"{field_name}.theta")
    phi = parse_angle(mapping.get("phi", 0.0), f"{field_name}.phi")
    try:
        return BlochDirection(theta, phi)
    except ValueError as exc:
        raise ScenarioError(f"{field_name}: {exc}")


def _parse_direction_pair(
    mapping: dict, field_name: str
) -> tuple[BlochDirection, BlochDirection]:
    raw = mapping.get("directions")
    if not isinstance(raw, list) or len(raw) != 2:
        raise ScenarioError(
            f"{field_name}.directions: explicit settings need exactly 2 directions"
        )
    return (
        _parse_direction(raw[0], f"{field_name}.directions[0]"),
        _parse_direction(raw[1], f"{field_name}.directions[1]"),
    )


def _parse_settings_model(mapping: dict, field_name: str) -> str:
    model = mapping.get("settings", "mub")
    if model not in SETTINGS_MODELS:
        raise ScenarioError(
            f"{field_name}.settings: must be one of {SETTINGS_MODELS}, got {model!r}"
        )
    return model


def _parse_state(raw: object) -> StateSpec:
    mapping = _require_mapping(raw, "state")
    _check_keys(mapping, {"kind", "theta"}, "state")
    kind = mapping.get("kind")
    if kind not in ("bell", "tilted"):
        raise ScenarioError(f"state.kind: must be 'bell' or 'tilted', got {kind!r}")
    if kind == "bell":
        if "theta" in mapping:
            raise ScenarioError("state.theta: only valid for kind 'tilted'")
        return StateSpec("bell")
    if "theta" not in mapping:
        raise ScenarioError("state.theta: required for kind 'tilted'")
    theta = parse_angle(mapping["theta"], "state.theta")
    if not 0.0 < theta <= math.pi / 4.0:
        raise ScenarioError(f"state.theta: must lie in (0, pi/4], got {theta}")
    return StateSpec("tilted", theta)


def _parse_party(raw: object, field_name: str) -> PartySpec:
    if raw is None:
        return PartySpec()
    mapping = _require_mapping(raw, field_name)
    _check_keys(mapping, {"settings", "directions"}, field_name)
    model = _parse_settings_model(mapping, field_name)
    if model == "mub":
        if "directions" in mapping:
            raise ScenarioError(
                f"{field_name}.directions: only valid for explicit settings"
            )
        return PartySpec("mub")
    return PartySpec("explicit", _parse_direction_pair(mapping, field_name))


def _parse_eve(raw: object, field_name: str) -> EveSpec:
    mapping = _require_mapping(raw, field_name)
    _check_keys(mapping, {"lambda", "settings", "directions", "bias"}, field_name)
    if "lambda" not in mapping:
        raise ScenarioError(f"{field_name}.lambda: required key is missing")
    sharpness = _number(mapping["lambda"], f"{field_name}.lambda")
    if not 0.0 < sharpness <= 1.0:
        raise ScenarioError(
            f"{field_name}.lambda: must lie in (0, 1], got {sharpness}"
        )
    bias = _number(mapping.get("bias", 0.5), f"{field_name}.bias")
    if not 0.0 <= bias <= 1.0:
        raise ScenarioError(f"{field_name}.bias: must lie in [0, 1], got {bias}")
    model = _parse_settings_model(mapping, field_name)
    if model == "mub":
        if "directions" in mapping:
            raise ScenarioError(
                f"{field_name}.directions: only valid for explicit settings"
            )
        return EveSpec(sharpness, "mub", None, bias)
    return EveSpec(
        sharpness, "explicit", _parse_direction_pair(mapping, field_name), bias
    )


def _parse_output(raw: object) -> OutputSpec:
    if raw is None:
        return OutputSpec()
    mapping = _require_mapping(raw, "output")
    _check_keys(mapping, {"format", "path"}, "output")
    fmt = mapping.get("format", "csv")
    if fmt not in OUTPUT_FORMATS:
        raise ScenarioError(
            f"output.format: must be one of {OUTPUT_FORMATS}, got {fmt!r}"
        )
    path = mapping.get("path")
    if path is not None and not isinstance(path, str):
        raise ScenarioError(f"output.path: expected a string, got {path!r}")
    return OutputSpec(fmt, path)


def loads_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document."""
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"scenario: not valid YAML ({exc})")
    mapping = _require_mapping(raw, "scenario")
    _check_keys(
        mapping,
        {
            "mode",
            "state",
            "alice",
            "bob",
            "eves",
            "targets",
            "theta1",
            "weak_lambdas",
            "output",
        },
        "scenario",
    )
    mode = mapping.get("mode")
    if mode not in MODES:
        raise ScenarioError(f"mode: must be one of {MODES}, got {mode!r}")

    state = _parse_state(mapping.get("state", {"kind": "bell"}))
    alice = _parse_party(mapping.get("alice"), "alice")
    bob = _parse_party(mapping.get("bob"), "bob")

    eves: tuple[EveSpec, ...] = ()
    if "eves" in mapping and mapping["eves"] is not None:
        raw_eves = mapping["eves"]
        if not isinstance(raw_eves, list):
            raise ScenarioError("eves: expected a list")
        eves = tuple(
            _parse_eve(entry, f"eves[{idx}]") for idx, entry in enumerate(raw_eves)
        )

    targets: tuple[float, ...] = ()
    if "targets" in mapping and mapping["targets"] is not None:
        raw_targets = mapping["targets"]
        if not isinstance(raw_targets, list) or not raw_targets:
            raise ScenarioError("targets: expected a non-empty list of rates")
        parsed = []
        for idx, entry in enumerate(raw_targets):
            rate = _number(entry, f"targets[{idx}]")
            if not 0.0 < rate < 1.0:
                raise ScenarioError(f"targets[{idx}]: must lie in (0, 1), got {rate}")
            parsed.append(rate)
        targets = tuple(parsed)

    theta1 = None
    if "theta1" in mapping and mapping["theta1"] is not None:
        theta1 = parse_angle(mapping["theta1"], "theta1")
        if not 0.0 < theta1 <= math.pi / 4.0:
            raise ScenarioError(f"theta1: must lie in (0, pi/4], got {theta1}")

    weak_lambdas: tuple[float, ...] = ()
    if "weak_lambdas" in mapping and mapping["weak_lambdas"] is not None:
        raw_weak = mapping["weak_lambdas"]
        if not isinstance(raw_weak, list) or not raw_weak:
            raise ScenarioError("weak_lambdas: expected a non-empty list of angles")
        parsed_weak = []
        for idx, entry in enumerate(raw_weak):
            angle = parse_angle(entry, f"weak_lambdas[{idx}]")
            if not 0.0 < angle <= math.pi / 4.0:
                raise ScenarioError(
                    f"weak_lambdas[{idx}]: must lie in (0, pi/4], got {angle}"
                )
            parsed_weak.append(angle)
        if len(parsed_weak) > MAX_UNBOUNDED_DEPTH:
            raise ScenarioError(
                f"weak_lambdas: at most {MAX_UNBOUNDED_DEPTH} weak measurements"
            )
        weak_lambdas = tuple(parsed_weak)

    scenario = Scenario(
        mode=mode,
        state=state,
        alice=alice,
        bob=bob,
        eves=eves,
        targets=targets,
        theta1=theta1,
        weak_lambdas=weak_lambdas,
        output=_parse_output(mapping.get("output")),
    )
    _validate_mode(scenario)
    return scenario


def _validate_mode(scenario: Scenario) -> None:
    if scenario.mode == "plan" and not scenario.targets:
        raise ScenarioError("targets: required for mode 'plan'")
    if scenario.mode == "unbounded":
        if scenario.theta1 is None:
            raise ScenarioError("theta1: required for mode 'unbounded'")
        if not scenario.weak_lambdas:
            raise ScenarioError("weak_lambdas: required for mode 'unbounded'")


def load_scenario(path: str | Path) -> Scenario:
    return loads_scenario(Path(path).read_text(encoding="utf-8"))


def _direction_dict(d: BlochDirection) -> dict:
    return {"theta": float(d.theta), "phi": float(d.phi)}


def dumps_scenario(scenario: Scenario) -> str:
    """Canonical serialization; parsing the result restores the scenario."""
    doc: dict = {"mode": scenario.mode}
    if scenario.state.kind == "bell":
        doc["state"] = {"kind": "bell"}
    else:
        doc["state"] = {"kind": "tilted", "theta": scenario.state.theta}
    for name, party in (("alice", scenario.alice), ("bob", scenario.bob)):
        entry: dict = {"settings": party.settings}
        if party.directions is not None:
            entry["directions"] = [_direction_dict(d) for d in party.directions]
        doc[name] = entry
    if scenario.eves:
        doc["eves"] = []
        for eve in scenario.eves:
            entry = {"lambda": eve.sharpness, "settings": eve.settings, "bias": eve.bias}
            if eve.directions is not None:
                entry["directions"] = [_direction_dict(d) for d in eve.directions]
            doc["eves"].append(entry)
    if scenario.targets:
        doc["targets"] = list(scenario.targets)
    if scenario.theta1 is not None:
        doc["theta1"] = scenario.theta1
    if scenario.weak_lambdas:
        doc["weak_lambdas"] = list(scenario.weak_lambdas)
    doc["output"] = {"format": scenario.output.format}
    if scenario.output.path is not None:
        doc["output"]["path"] = scenario.output.path
    return yaml.safe_dump(doc, sort_keys=True, default_flow_style=False)


def to_chain_spec(scenario: Scenario) -> ChainSpec:
    """Build the simulator input for a chain-mode scenario."""
    if scenario.mode != "chain":
        raise ScenarioError(f"mode: expected 'chain', got {scenario.mode!r}")
    return ChainSpec(
        initial=scenario.state.build(),
        alice=scenario.alice.build(),
        eves=tuple(eve.build() for eve in scenario.eves),
        bob=scenario.bob.build(),
        input_bias=tuple(eve.bias for eve in scenario.eves),
    )
