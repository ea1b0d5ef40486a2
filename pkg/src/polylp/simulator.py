"""Seeded Monte-Carlo harness for decoder trials over channel sweeps.

Each trial derives its own generator from (seed, point index, trial
index), so statistics are invariant to how trials are split across
worker processes.  Word- and bit-error counts, iteration and wall-time
sums split by outcome, and certified maximum-likelihood failures are
accumulated per channel point and emitted as CSV.
"""

from __future__ import annotations

import csv
import enum
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .admm_decoder import AdmmConfig, DecodeOutput, decode
from .bp_decoder import BpConfig, decode_bp
from .channels import ChannelModel, llr, transmit
from .codes import ParityCheckMatrix, is_codeword
from .dual_ascent import DualAscentConfig, decode_dual_ascent

CSV_COLUMNS = [
    "decoder",
    "channel_kind",
    "channel_param",
    "rate",
    "n",
    "trials",
    "word_errors",
    "bit_errors",
    "wer",
    "ber",
    "avg_iters_all",
    "avg_iters_correct",
    "avg_iters_err",
    "avg_time_all_s",
    "avg_time_correct_s",
    "avg_time_err_s",
    "ml_errors",
    "seed",
]

ALGORITHMS = ("admm", "bp", "dual-ascent")


@dataclass(frozen=True)
class DecoderRef:
    """Picklable decoder selection: algorithm name plus its config."""

    algo: str = "admm"
    config: AdmmConfig | BpConfig | DualAscentConfig | None = None

    def __post_init__(self) -> None:
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown decoder {self.algo!r}; use one of {ALGORITHMS}")

    def bind(self, code: ParityCheckMatrix) -> Callable[[NDArray[np.float64]], DecodeOutput]:
        if self.algo == "admm":
            cfg = self.config if self.config is not None else AdmmConfig()
            return lambda g: decode(g, code, cfg)
        if self.algo == "bp":
            cfg = self.config if self.config is not None else BpConfig()
            return lambda g: decode_bp(g, code, cfg)
        cfg = self.config if self.config is not None else DualAscentConfig()
        return lambda g: decode_dual_ascent(g, code, cfg)


class MlOutcome(enum.Enum):
    """Accounting of one word error against a maximum-likelihood decoder."""

    SUCCESS = "ml_success"
    CERTIFIED_ERROR = "ml_certified_error"
    UNKNOWN_AS_SUCCESS = "unknown_counted_as_success"


def ml_account(
    output: DecodeOutput,
    gamma: NDArray[np.float64],
    code: ParityCheckMatrix,
    transmitted: ArrayLike | None = None,
) -> MlOutcome:
    """Classify a word error for the estimated lower bound on ML decoding.

    A rounded output that is a valid codeword with strictly lower cost
    than the transmitted word certifies that an ML decoder would also
    fail.  Ties and non-codeword outputs count as ML successes, making
    the resulting error count a lower bound.
    """
    sent = (
        np.zeros(code.n_vars, dtype=np.uint8)
        if transmitted is None
        else np.asarray(transmitted, dtype=np.uint8)
    )
    est = output.hard_decision
    if not is_codeword(code, est):
        return MlOutcome.UNKNOWN_AS_SUCCESS
    if float(gamma @ est) < float(gamma @ sent):
        return MlOutcome.CERTIFIED_ERROR
    return MlOutcome.SUCCESS


@dataclass
class TrialStats:
    """Accumulated statistics of one (decoder, channel point) run."""

    decoder_id: str
    channel_kind: str
    channel_param: float
    seed: int
    n_vars: int
    rate: float
    trials: int = 0
    word_errors: int = 0
    bit_errors: int = 0
    iter_sum_correct: int = 0
    iter_sum_erroneous: int = 0
    time_sum_correct: float = 0.0
    time_sum_erroneous: float = 0.0
    ml_errors: int = 0

    @property
    def wer(self) -> float:
        return self.word_errors / self.trials if self.trials else 0.0

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.n_vars) if self.trials else 0.0

    def merge(self, other: "TrialStats") -> "TrialStats":
        if (self.decoder_id, self.channel_kind, self.channel_param) != (
            other.decoder_id,
            other.channel_kind,
            other.channel_param,
        ):
            raise ValueError("cannot merge stats from different runs")
        return replace(
            self,
            trials=self.trials + other.trials,
            word_errors=self.word_errors + other.word_errors,
            bit_errors=self.bit_errors + other.bit_errors,
            iter_sum_correct=self.iter_sum_correct + other.iter_sum_correct,
            iter_sum_erroneous=self.iter_sum_erroneous + other.iter_sum_erroneous,
            time_sum_correct=self.time_sum_correct + other.time_sum_correct,
            time_sum_erroneous=self.time_sum_erroneous + other.time_sum_erroneous,
            ml_errors=self.ml_errors + other.ml_errors,
        )


# One decoded trial: (word_error, bit_errors, iterations, seconds, ml_error).
_TrialRecord = tuple[bool, int, int, float, bool]


def _run_trial(
    code: ParityCheckMatrix,
    channel: ChannelModel,
    decode_fn: Callable[[NDArray[np.float64]], DecodeOutput],
    transmitted: NDArray[np.uint8],
    seed: int,
    point_index: int,
    trial_index: int,
) -> _TrialRecord:
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(point_index, trial_index))
    )
    received = transmit(transmitted, channel, rng)
    gamma = llr(received, channel)
    t0 = time.perf_counter()
    out = decode_fn(gamma)
    elapsed = time.perf_counter() - t0
    bit_errors = int(np.count_nonzero(out.hard_decision != transmitted))
    word_error = bit_errors > 0
    ml_error = False
    if word_error:
        ml_error = ml_account(out, gamma, code, transmitted) is MlOutcome.CERTIFIED_ERROR
    return word_error, bit_errors, out.iterations, elapsed, ml_error


def _run_chunk(payload: tuple) -> list[_TrialRecord]:
    code, channel, decoder, transmitted, seed, point_index, trial_indices = payload
    decode_fn = decoder.bind(code)
    return [
        _run_trial(code, channel, decode_fn, transmitted, seed, point_index, t)
        for t in trial_indices
    ]


def _wave(
    code: ParityCheckMatrix,
    channel: ChannelModel,
    decoder: DecoderRef,
    transmitted: NDArray[np.uint8],
    seed: int,
    point_index: int,
    trial_indices: Sequence[int],
    workers: int,
    pool: ProcessPoolExecutor | None,
) -> list[_TrialRecord]:
    if pool is None or len(trial_indices) < 2 * workers:
        decode_fn = decoder.bind(code)
        return [
            _run_trial(code, channel, decode_fn, transmitted, seed, point_index, t)
            for t in trial_indices
        ]
    chunks = np.array_split(np.asarray(trial_indices), workers * 4)
    payloads = [
        (code, channel, decoder, transmitted, seed, point_index, chunk.tolist())
        for chunk in chunks
        if chunk.size
    ]
    records: list[_TrialRecord] = []
    for part in pool.map(_run_chunk, payloads):
        records.extend(part)
    return records


def run_point(
    code: ParityCheckMatrix,
    channel: ChannelModel,
    decoder: DecoderRef,
    *,
    n_trials: int | None = None,
    target_errors: int | None = None,
    max_trials: int = 1_000_000,
    seed: int = 0,
    point_index: int = 0,
    workers: int = 1,
    transmitted: ArrayLike | None = None,
    pool: ProcessPoolExecutor | None = None,
) -> TrialStats:
    """Monte-Carlo decode trials at one channel point.

    Transmits the all-zero codeword (valid under channel symmetry) or an
    explicitly supplied codeword.  Either a fixed trial count or a
    stop-at-target-errors budget must be given; the latter is capped at
    ``max_trials``.  Results depend only on (seed, point_index, trial
    index), never on the worker count.
    """
    if (n_trials is None) == (target_errors is None):
        raise ValueError("give exactly one of n_trials or target_errors")
    if n_trials is not None and n_trials < 1:
        raise ValueError("n_trials must be at least 1")
    if target_errors is not None and target_errors < 1:
        raise ValueError("target_errors must be at least 1")

    sent = (
        np.zeros(code.n_vars, dtype=np.uint8)
        if transmitted is None
        else np.asarray(transmitted, dtype=np.uint8)
    )
    if not is_codeword(code, sent):
        raise ValueError("transmitted word must be a codeword")

    own_pool = False
    if workers > 1 and pool is None:
        pool = ProcessPoolExecutor(max_workers=workers)
        own_pool = True
    try:
        if n_trials is not None:
            records = _wave(
                code, channel, decoder, sent, seed, point_index,
                range(n_trials), workers, pool,
            )
        else:
            # Waves of a fixed size keep the trial order, and therefore the
            # stopping point, independent of the worker count.
            records = []
            errors = 0
            next_index = 0
            wave_size = 256
            while errors < target_errors and next_index < max_trials:
                hi = min(next_index + wave_size, max_trials)
                batch = _wave(
                    code, channel, decoder, sent, seed, point_index,
                    range(next_index, hi), workers, pool,
                )
                records.extend(batch)
                errors += sum(1 for rec in batch if rec[0])
                next_index = hi
            if errors >= target_errors:
                # Truncate exactly at the trial that met the target.
                count = 0
                for k, rec in enumerate(records):
                    if rec[0]:
                        count += 1
                        if count == target_errors:
                            records = records[: k + 1]
                            break
    finally:
        if own_pool and pool is not None:
            pool.shutdown()

    stats = TrialStats(
        decoder_id=decoder.algo,
        channel_kind=channel.kind,
        channel_param=channel.param,
        seed=seed,
        n_vars=code.n_vars,
        rate=code.design_rate,
    )
    for word_error, bit_errors, iters, elapsed, ml_error in records:
        stats.trials += 1
        if word_error:
            stats.word_errors += 1
            stats.bit_errors += bit_errors
            stats.iter_sum_erroneous += iters
            stats.time_sum_erroneous += elapsed
            stats.ml_errors += int(ml_error)
        else:
            stats.iter_sum_correct += iters
            stats.time_sum_correct += elapsed
    return stats


def sweep(
    code: ParityCheckMatrix,
    channel_points: Sequence[ChannelModel],
    decoder: DecoderRef,
    *,
    n_trials: int | None = None,
    target_errors: int | None = None,
    max_trials: int = 1_000_000,
    seed: int = 0,
    workers: int = 1,
) -> list[TrialStats]:
    """Run one :func:`run_point` per channel point, sharing the worker pool."""
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        return [
            run_point(
                code,
                point,
                decoder,
                n_trials=n_trials,
                target_errors=target_errors,
                max_trials=max_trials,
                seed=seed,
                point_index=k,
                workers=workers,
                pool=pool,
            )
            for k, point in enumerate(channel_points)
        ]
    finally:
        if pool is not None:
            pool.shutdown()


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def stats_to_csv(stats: Sequence[TrialStats], timing: bool = True) -> str:
    """Render sweep statistics as CSV; header always present.

    Undefined averages (no trials in a split) render empty.  With
    ``timing`` disabled the wall-time columns are left empty so reruns
    are byte-identical.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for s in stats:
        correct = s.trials - s.word_errors
        iter_total = s.iter_sum_correct + s.iter_sum_erroneous
        time_total = s.time_sum_correct + s.time_sum_erroneous
        row = [
            s.decoder_id,
            s.channel_kind,
            _fmt(s.channel_param),
            _fmt(s.rate),
            s.n_vars,
            s.trials,
            s.word_errors,
            s.bit_errors,
            _fmt(s.wer),
            _fmt(s.ber),
            _fmt(iter_total / s.trials) if s.trials else "",
            _fmt(s.iter_sum_correct / correct) if correct else "",
            _fmt(s.iter_sum_erroneous / s.word_errors) if s.word_errors else "",
            _fmt(time_total / s.trials) if timing and s.trials else "",
            _fmt(s.time_sum_correct / correct) if timing and correct else "",
            _fmt(s.time_sum_erroneous / s.word_errors) if timing and s.word_errors else "",
            s.ml_errors,
            s.seed,
        ]
        writer.writerow(row)
    return buf.getvalue()
