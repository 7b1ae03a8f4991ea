"""Checkpoint files: a fixed JSON schema that round-trips floats bit-exactly.

Schema:

    {"input_dim": m, "output_bias": v, "units": [{"a": [...], "xi": v, "b": v}]}

Floats are written with 17 significant digits, which is enough for every
IEEE double to survive a write/read cycle unchanged, so a checkpoint written
twice from the same network is byte-identical and loads back equal.
"""

import json
import math

from .network import Network, Unit


def _fmt(value: float) -> str:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"checkpoint floats must be finite, got {value!r}")
    return format(value, ".17g")


def dumps_network(net: Network) -> str:
    """Serialize a network to the checkpoint JSON text."""
    lines = ["{"]
    lines.append(f'  "input_dim": {net.input_dim},')
    lines.append(f'  "output_bias": {_fmt(net.output_bias)},')
    if not net.units:
        lines.append('  "units": []')
    else:
        lines.append('  "units": [')
        last = len(net.units) - 1
        for j, unit in enumerate(net.units):
            weights = ", ".join(_fmt(w) for w in unit.weights_in)
            comma = "" if j == last else ","
            lines.append(
                f'    {{"a": [{weights}], "xi": {_fmt(unit.bias)}, '
                f'"b": {_fmt(unit.weight_out)}}}{comma}'
            )
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_checkpoint(net: Network, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_network(net))


def loads_network(text: str) -> Network:
    """Parse checkpoint JSON text back into a network."""
    doc = json.loads(text)
    try:
        input_dim = int(doc["input_dim"])
        output_bias = float(doc["output_bias"])
        raw_units = doc["units"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed checkpoint: {exc}") from exc
    if not isinstance(raw_units, list):
        raise ValueError("malformed checkpoint: \"units\" must be a list")
    units = []
    for entry in raw_units:
        try:
            units.append(Unit(tuple(float(w) for w in entry["a"]),
                              float(entry["xi"]), float(entry["b"])))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed checkpoint unit: {entry!r}") from exc
    return Network(input_dim=input_dim, units=tuple(units), output_bias=output_bias)


def load_checkpoint(path) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_network(fh.read())
