"""Mean King and basis-tracking protocol runs.

Both variants share one engine:

1. Alice prepares a two-qudit state (the normalized balance state for the
   Mean King problem, a line state for tracking);
2. the King measures particle 1 in basis ``b`` and sees outcome ``m``;
3. Alice measures the line-state basis and sees a line ``(mddot', m0'')``;
4. Alice infers ``m`` (Mean King, after ``b`` is disclosed) or ``b``
   (tracking, from her prepared line and the outcome line alone).

Runs are either exhaustive (every branch with nonzero probability, in label
order) or sampled from a seed. Sampled trial ``t`` draws from
``SeedSequence([seed, t])`` so that any trial or channel round can be
replayed on its own.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from . import _kernels
from .collective import embed_collective
from .entangle import balance_state, line_state, line_state_matrix
from .finitefield import ModInt, PrimeDim, as_dim
from .geometry import Line, all_lines, line_from_index, row_on_line
from .mub import (
    CB,
    BasisLabel,
    ComputationalBasis,
    MubIndex,
    Shifted,
    basis_labels,
    basis_to_json,
    column_index,
    mub_state,
    mub_table,
    parse_basis,
)
from .qudit import Ket, inner

PROB_TOL = 1e-12


@dataclass(frozen=True)
class InferredOutcome:
    m: ModInt

    def to_json(self) -> dict:
        return {"kind": "outcome", "value": self.m.value}


@dataclass(frozen=True)
class InferredBasis:
    b: BasisLabel

    def to_json(self) -> dict:
        return {"kind": "basis", "value": basis_to_json(self.b)}


@dataclass(frozen=True)
class _Undetermined:
    def to_json(self) -> dict:
        return {"kind": "undetermined"}

    def __repr__(self) -> str:
        return "Undetermined"


Undetermined = _Undetermined()
InferenceResult = Union[InferredOutcome, InferredBasis, _Undetermined]


@dataclass(frozen=True)
class Sampled:
    """Draw ``trials`` rounds; trial ``t`` uses stream ``[seed, first_trial + t]``."""

    seed: int
    trials: int = 1
    first_trial: int = 0


EXHAUSTIVE = "exhaustive"
Mode = Union[Literal["exhaustive"], Sampled]


@dataclass(frozen=True, eq=False)
class Transcript:
    dim: PrimeDim
    variant: Literal["MKP", "Tracking"]
    prepared: Union[Literal["balance"], Line]
    king_basis: BasisLabel
    king_outcome: ModInt
    control_outcome: Line
    inference: InferenceResult
    probabilities: dict | None = None
    post_state: Ket | None = field(default=None, repr=False)

    @property
    def correct(self) -> bool | None:
        """Whether the inference matches what the King actually did; None for erasures."""
        if isinstance(self.inference, InferredOutcome):
            return self.inference.m == self.king_outcome
        if isinstance(self.inference, InferredBasis):
            return self.inference.b == self.king_basis
        return None

    def to_json(self) -> dict:
        out = {
            "dim": self.dim.d,
            "variant": self.variant,
            "prepared": "balance" if self.prepared == "balance"
            else {"mddot": self.prepared.m_ddot.value, "m0": self.prepared.m0.value},
            "king_basis": basis_to_json(self.king_basis),
            "king_outcome": self.king_outcome.value,
            "control": {"mddot_prime": self.control_outcome.m_ddot.value,
                        "m0_dprime": self.control_outcome.m0.value},
            "inference": self.inference.to_json(),
        }
        if self.probabilities is not None:
            out["probabilities"] = dict(self.probabilities)
        return out


# -- inference rules ------------------------------------------------------

def infer_king_outcome(b: BasisLabel, control: Line) -> ModInt:
    """Row of the outcome line in column ``b``."""
    return row_on_line(control, b)


def infer_king_basis(prepared: Line, control: Line) -> InferenceResult:
    """``b = (m0'' - m0) / (mddot - mddot')``; equal ``mddot`` means CB."""
    if control == prepared:
        return Undetermined
    if control.m_ddot == prepared.m_ddot:
        return InferredBasis(CB)
    return InferredBasis(Shifted((control.m0 - prepared.m0) / (prepared.m_ddot - control.m_ddot)))


def tracking_constraint(prepared: Line, control: Line, b: BasisLabel) -> bool:
    """Whether ``control`` can follow ``prepared`` when the King used ``b``."""
    if isinstance(b, ComputationalBasis):
        return control.m_ddot == prepared.m_ddot
    return control.m0 - prepared.m0 == b.b * (prepared.m_ddot - control.m_ddot)


# -- engine ---------------------------------------------------------------

def alice_control_basis(d: int | PrimeDim) -> list[tuple[Line, Ket]]:
    """Eigenbasis of Alice's control observable; outcome label = line."""
    dim = as_dim(d)
    table = line_state_matrix(dim.d)
    return [(line_from_index(dim, k), Ket(table[k])) for k in range(dim.d * dim.d)]


def control_eigenvalue(j: Line) -> int:
    """Label of outcome ``j``; only its identity matters."""
    return j.index


def control_operator(d: int | PrimeDim) -> np.ndarray:
    dim = as_dim(d)
    table = line_state_matrix(dim.d)
    labels = np.arange(dim.d * dim.d, dtype=np.float64)
    return (table.T * labels) @ table.conj()


def _branch_table(dim: PrimeDim, psi: np.ndarray, b: BasisLabel) -> np.ndarray:
    basis = mub_table(dim.d)[column_index(b)]
    return _kernels.branch_probabilities(psi, basis, line_state_matrix(dim.d))


def _post_control_state(dim: PrimeDim, psi: np.ndarray, b: BasisLabel, m: ModInt, j: Line) -> Ket:
    """Post-control state: project particle 1, renormalize, project on ``j``, renormalize."""
    u = mub_state(dim, MubIndex(b, m)).amplitudes
    residue = u.conj() @ psi.reshape(dim.d, dim.d)
    after_king = np.kron(u, residue)
    after_king /= np.linalg.norm(after_king)
    pj = line_state_matrix(dim.d)[j.index]
    after_control = pj * np.vdot(pj, after_king)
    return Ket(after_control / np.linalg.norm(after_control))


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def _run(dim, variant, prepared, psi, b, mode, infer) -> list[Transcript]:
    table = _branch_table(dim, psi, b)
    king = table.sum(axis=1)
    nl = table.shape[1]

    def make(k: int, jx: int) -> Transcript:
        m, j = dim(k), line_from_index(dim, jx)
        probs = {"king": float(king[k]), "control": float(table[k, jx] / king[k]),
                 "branch": float(table[k, jx])}
        return Transcript(dim, variant, prepared, b, m, j, infer(m, j), probs,
                          _post_control_state(dim, psi, b, m, j))

    if mode == EXHAUSTIVE:
        return [make(k, jx) for k in range(dim.d) if king[k] > PROB_TOL
                for jx in range(nl) if table[k, jx] > PROB_TOL]
    if not isinstance(mode, Sampled):
        raise ValueError(f"mode must be 'exhaustive' or Sampled, got {mode!r}")
    out = []
    for t in range(mode.trials):
        rng = _trial_rng(mode.seed, mode.first_trial + t)
        k = int(rng.choice(dim.d, p=king / king.sum()))
        jx = int(rng.choice(nl, p=table[k] / table[k].sum()))
        out.append(make(k, jx))
    return out


def _as_line(dim: PrimeDim, j) -> Line:
    if isinstance(j, Line):
        if j.m_ddot.dim != dim or j.m0.dim != dim:
            raise ValueError(f"line {j} does not belong to dimension {dim.d}")
        return j
    try:
        a, c = j
    except (TypeError, ValueError):
        raise ValueError(f"invalid line {j!r}; expected (mddot, m0)") from None
    if not all(isinstance(v, int) and 0 <= v < dim.d for v in (a, c)):
        raise ValueError(f"invalid line {j!r}; coordinates must lie in 0..{dim.d - 1}")
    return Line(dim(a), dim(c))


def run_mkp(d: int | PrimeDim, b, mode: Mode = EXHAUSTIVE) -> list[Transcript]:
    """Mean King round(s) with the King using basis ``b``."""
    dim = as_dim(d)
    b = parse_basis(dim, b)
    psi = balance_state(dim).vector.amplitudes / np.sqrt(dim.d)
    return _run(dim, "MKP", "balance", psi, b, mode,
                lambda m, j: InferredOutcome(infer_king_outcome(b, j)))


def run_tracking(d: int | PrimeDim, j, b, mode: Mode = EXHAUSTIVE) -> list[Transcript]:
    """Tracking round(s) from prepared line ``j`` with the King using basis ``b``."""
    dim = as_dim(d)
    j = _as_line(dim, j)
    b = parse_basis(dim, b)
    psi = line_state(dim, j).vector.amplitudes
    return _run(dim, "Tracking", j, psi, b, mode,
                lambda m, jj: infer_king_basis(j, jj))


def verify_reset(d: int | PrimeDim, transcript: Transcript, tol: float = 1e-10) -> bool:
    """Post-control state equals the outcome line state up to a global phase."""
    return reset_fidelity(d, transcript) >= 1 - tol


def reset_fidelity(d: int | PrimeDim, transcript: Transcript) -> float:
    dim = as_dim(d)
    if transcript.post_state is None:
        raise ValueError("transcript carries no post-measurement state")
    j = transcript.control_outcome
    # independent construction of the line state: |mddot>_c |2 m0>_r
    target = embed_collective(dim, mub_state(dim, MubIndex(CB, j.m_ddot)),
                              mub_state(dim, MubIndex(Shifted(dim(0)), 2 * j.m0)))
    return abs(inner(target, transcript.post_state)) ** 2


def run_channel(d: int | PrimeDim, message, initial_line, seed: int) -> tuple[list[InferenceResult], list[Transcript]]:
    """Send ``message`` (a sequence of basis labels) one tracking round per symbol.

    Each round starts from the previous round's outcome line. Undetermined
    rounds are returned as ``Undetermined`` (erasures), never retried.
    """
    dim = as_dim(d)
    current = _as_line(dim, initial_line)
    decoded, transcripts = [], []
    for r, sym in enumerate(message):
        (t,) = run_tracking(dim, current, sym, Sampled(seed, 1, first_trial=r))
        decoded.append(t.inference)
        transcripts.append(t)
        current = t.control_outcome
    return decoded, transcripts


def random_message(d: int | PrimeDim, length: int, seed: int) -> list[BasisLabel]:
    dim = as_dim(d)
    labels = basis_labels(dim)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x6D7367]))
    return [labels[i] for i in rng.integers(0, len(labels), size=length)]


# -- summaries and sweeps -------------------------------------------------

def summarize(transcripts: list[Transcript], exhaustive: bool) -> dict:
    """Accuracy and erasure statistics; erasures are probability-weighted when exhaustive."""
    n = len(transcripts)
    decided = [t for t in transcripts if t.correct is not None]
    out = {
        "rounds": n,
        "accuracy": (sum(bool(t.correct) for t in decided) / len(decided)) if decided else None,
    }
    erasures = [t for t in transcripts if t.correct is None]
    if transcripts and transcripts[0].variant == "Tracking":
        if exhaustive:
            out["erasure_rate"] = sum(t.probabilities["branch"] for t in erasures)
        else:
            out["erasure_rate"] = len(erasures) / n if n else None
    freq: dict[str, float] = {}
    for t in transcripts:
        key = str(t.king_outcome.value)
        freq[key] = freq.get(key, 0.0) + (t.probabilities["branch"] if exhaustive else 1.0 / n)
    out["king_outcome_frequencies"] = dict(sorted(freq.items(), key=lambda kv: int(kv[0])))
    return out


def thread_count() -> int:
    """Worker cap from ``MEANKING_THREADS``; defaults to the CPU count."""
    raw = os.environ.get("MEANKING_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def tracking_sweep(d: int | PrimeDim) -> list[list[Transcript]]:
    """Exhaustive tracking runs for every (prepared line, basis), in label order."""
    dim = as_dim(d)
    jobs = [(j, b) for j in all_lines(dim) for b in basis_labels(dim)]
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        return list(pool.map(lambda jb: run_tracking(dim, jb[0], jb[1]), jobs))


def mkp_sweep(d: int | PrimeDim) -> list[list[Transcript]]:
    dim = as_dim(d)
    return [run_mkp(dim, b) for b in basis_labels(dim)]
