"""
Path simulation: full records, summaries and continuations from a frozen state
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
import singer

from barrier_urns import kernels
from barrier_urns.config_utils import TAIL_AVERAGE, ExperimentConfig, LimitMethod, config_hash
from barrier_urns.distributions import sample_barriers, sample_reinforcements
from barrier_urns.errors import MisconfigurationError, PathIntegrityError
from barrier_urns.random_streams import PathStreams, path_streams
from barrier_urns.urn import Barriers, PathRecord, UrnState, init_state

LOGGER = singer.get_logger('barrier_urns')


@dataclass(frozen=True)
class PathSummary:
    """What an ensemble keeps of a path: the end state, checkpoints and the estimated limit"""
    path_index: int
    seed: int
    barriers: Barriers
    start_step: int
    horizon: int
    z_terminal: float
    z_hat: float
    black: float
    total: float
    ones: int
    checkpoints: Tuple[Tuple[int, float], ...] = ()

    @property
    def steps(self) -> int:
        return self.horizon - self.start_step

    @property
    def s_over_n(self) -> float:
        return self.total / self.horizon

    @property
    def x_bar(self) -> float:
        """Frequency of black draws over the simulated steps"""
        return self.ones / self.steps

    def z_at(self, step: int) -> float:
        for checkpoint, z in self.checkpoints:
            if checkpoint == step:
                return z
        raise KeyError(f'No checkpoint at step {step}')


def _draw_arrays(config: ExperimentConfig, streams: PathStreams, start: int, count: int):
    uniforms = streams.selection.random(count)
    b_values = sample_reinforcements(config.reinforcement_spec, start, count, streams.black)
    if config.red_reinforcement_spec is None:
        return uniforms, b_values, b_values, None

    r_values = sample_reinforcements(config.red_reinforcement_spec, start, count, streams.red)
    return uniforms, b_values, r_values, r_values


def simulate_path(config: ExperimentConfig, seed: int, horizon: Optional[int] = None,
                  digest: Optional[str] = None) -> PathRecord:
    """
    Simulates one path and records every draw and state.
    Barriers are drawn once at time 0; X_{n+1} ~ Bernoulli(Z_n); B_{n+1} is drawn
    independently of the past and of X_{n+1}. Same (config, seed, horizon), same record.
    Args:
        config: experiment config
        seed: unsigned 64-bit path seed
        horizon: number of steps N, defaults to config.horizon
        digest: config hash to stamp, computed when not given

    Returns: PathRecord
    """
    horizon = config.horizon if horizon is None else horizon
    if horizon < 1:
        raise MisconfigurationError(f'horizon must be >= 1, got {horizon}')

    streams = path_streams(seed)
    barriers = sample_barriers(config.barrier_spec, streams.barriers)
    state = init_state(config.b, config.r, barriers)
    uniforms, b_values, r_values, red = _draw_arrays(config, streams, 1, horizon)

    x = np.empty(horizon, dtype=np.int8)
    black = np.empty(horizon + 1)
    total = np.empty(horizon + 1)
    z = np.empty(horizon + 1)
    kernels.record_path(state.black, state.total, barriers.lower, barriers.upper,
                        uniforms, b_values, r_values, x, black, total, z)

    return PathRecord(config_hash=digest or config_hash(config),
                      seed=seed,
                      barriers=barriers,
                      initial_black=state.black,
                      initial_red=state.red,
                      x=x,
                      b_reinforce=b_values,
                      r_reinforce=red,
                      z_series=z,
                      s_series=total,
                      black_series=black)


def _tail_start(limit_method: LimitMethod, start_step: int, horizon: int) -> int:
    if limit_method.method != TAIL_AVERAGE:
        return horizon
    if limit_method.window > horizon - start_step:
        raise MisconfigurationError(
            f'tail window {limit_method.window} is longer than the {horizon - start_step} simulated steps')
    return horizon - limit_method.window


def _advance(config: ExperimentConfig, state: UrnState, streams: PathStreams, horizon: int,
             checkpoints: Sequence[int], path_index: int, seed: int) -> PathSummary:
    start = state.step_index
    count = horizon - start
    if count < 1:
        raise MisconfigurationError(f'horizon {horizon} must be after step {start}')

    uniforms, b_values, r_values, _ = _draw_arrays(config, streams, start + 1, count)
    steps = np.asarray(sorted(checkpoints), dtype=np.int64)
    z_at = np.full(len(steps), np.nan)
    tail_start = _tail_start(config.limit_method, start, horizon)

    black, total, ones, tail_sum = kernels.advance_path(state.black, state.total,
                                                        state.barriers.lower, state.barriers.upper,
                                                        uniforms, b_values, r_values,
                                                        start, steps, z_at, tail_start)
    z_terminal = black / total
    z_hat = tail_sum / (horizon - tail_start) if tail_start < horizon else z_terminal

    return PathSummary(path_index=path_index,
                       seed=seed,
                       barriers=state.barriers,
                       start_step=start,
                       horizon=horizon,
                       z_terminal=z_terminal,
                       z_hat=z_hat,
                       black=black,
                       total=total,
                       ones=int(ones),
                       checkpoints=tuple(zip(steps.tolist(), z_at.tolist())))


def summarize_path(config: ExperimentConfig, seed: int, horizon: Optional[int] = None,
                   checkpoints: Sequence[int] = (), path_index: int = 0) -> PathSummary:
    """
    Runs the same path as simulate_path(config, seed, horizon) but keeps only a summary
    """
    horizon = config.horizon if horizon is None else horizon
    streams = path_streams(seed)
    barriers = sample_barriers(config.barrier_spec, streams.barriers)
    state = init_state(config.b, config.r, barriers)

    return _advance(config, state, streams, horizon, checkpoints, path_index, seed)


def continue_from(config: ExperimentConfig, state: UrnState, seed: int, horizon: Optional[int] = None,
                  checkpoints: Sequence[int] = (), index: int = 0) -> PathSummary:
    """
    Runs one future of a frozen state up to `horizon`, with its own streams keyed by `seed`.
    The barriers of the state are kept.
    """
    horizon = config.horizon if horizon is None else horizon
    return _advance(config, state, path_streams(seed), horizon, checkpoints, index, seed)


def state_at(path: PathRecord, n: int) -> UrnState:
    """The state of a recorded path after n steps"""
    return UrnState(black=float(path.black_series[n]),
                    total=float(path.s_series[n]),
                    z=float(path.z_series[n]),
                    step_index=n,
                    barriers=path.barriers)


def replay_path(path: PathRecord) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Recomputes (black, total, z) series from the recorded draws
    """
    start = path.initial_state()
    black = np.empty(path.horizon + 1)
    total = np.empty(path.horizon + 1)
    z = np.empty(path.horizon + 1)
    kernels.replay_path(start.black, start.total, path.barriers.lower, path.barriers.upper,
                        np.asarray(path.x, dtype=np.int8),
                        np.asarray(path.b_reinforce, dtype=np.float64),
                        np.asarray(path.red_reinforce, dtype=np.float64),
                        black, total, z)
    return black, total, z


def check_replay(path: PathRecord) -> None:
    """
    Raises: PathIntegrityError unless replaying the draws reproduces the record bit for bit
    """
    black, total, z = replay_path(path)
    for name, replayed, recorded in (('black_series', black, path.black_series),
                                     ('s_series', total, path.s_series),
                                     ('z_series', z, path.z_series)):
        if not np.array_equal(replayed, recorded):
            index = int(np.flatnonzero(replayed != recorded)[0])
            raise PathIntegrityError(
                f'Path with seed {path.seed} does not replay: {name} differs first at index {index}')
