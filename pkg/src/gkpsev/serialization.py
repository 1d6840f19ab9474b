"""JSON interchange for states.

Discrete base states::

    {"kind": "discrete", "n_prime": 8, "amplitudes": [[re, im], ...]}

Gaussian combs::

    {"kind": "gaussian_comb", "V": 0.001, "N": 3, "k": 0.0,
     "components": [[center, re, im], ...]}
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .exceptions import PreconditionError
from .states import DiscreteBaseState, GaussianCombState

State = Union[DiscreteBaseState, GaussianCombState]


def state_to_dict(state: State) -> dict:
    if isinstance(state, DiscreteBaseState):
        return {
            "kind": "discrete",
            "n_prime": state.n_prime,
            "amplitudes": [[a.real, a.imag] for a in state.amplitudes],
        }
    if isinstance(state, GaussianCombState):
        return {
            "kind": "gaussian_comb",
            "V": state.V,
            "N": state.N,
            "k": state.k,
            "components": [[c, a.real, a.imag] for c, a in state.components],
        }
    raise TypeError(f"cannot serialize {type(state).__name__}")


def state_from_dict(data: dict) -> State:
    try:
        kind = data["kind"]
        if kind == "discrete":
            amps = tuple(complex(re, im) for re, im in data["amplitudes"])
            return DiscreteBaseState(int(data["n_prime"]), amps)
        if kind == "gaussian_comb":
            comps = tuple((float(c), complex(re, im)) for c, re, im in data["components"])
            return GaussianCombState(comps, float(data["V"]), int(data["N"]), float(data.get("k", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PreconditionError):
            raise
        raise PreconditionError(f"malformed state document: {exc}") from exc
    raise PreconditionError(f"unknown state kind {data.get('kind')!r}")


def dumps_state(state: State) -> str:
    return json.dumps(state_to_dict(state))


def loads_state(text: str) -> State:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"state file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise PreconditionError("state document must be a JSON object")
    if "state" in data and "kind" not in data:
        data = data["state"]
    return state_from_dict(data)


def load_state(path: Union[str, Path]) -> State:
    return loads_state(Path(path).read_text())
