"""
Compiled per-path loops.

All loops share `_reinforce`, which performs the same floating point
operations in the same order as `barrier_urns.urn.step`, so a path produced
here replays bit for bit through the scalar update rule.
"""
import numba


@numba.njit(cache=True, nogil=True, inline='always')
def _reinforce(x, z, black, total, lower, upper, b_value, r_value):
    if x == 1:
        if z < upper:
            black += b_value
            total += b_value
    elif z > lower:
        total += r_value
    return black, total


@numba.njit(cache=True, nogil=True)
def record_path(black, total, lower, upper, uniforms, b_values, r_values,
                x_out, black_out, total_out, z_out):
    """
    Runs a path and stores every state. X_{n+1} = 1 iff uniforms[n] < Z_n,
    so P(X_{n+1} = 1 | past) = Z_n.
    """
    z = black / total
    black_out[0] = black
    total_out[0] = total
    z_out[0] = z

    for i in range(uniforms.shape[0]):
        x = 1 if uniforms[i] < z else 0
        black, total = _reinforce(x, z, black, total, lower, upper, b_values[i], r_values[i])
        z = black / total
        x_out[i] = x
        black_out[i + 1] = black
        total_out[i + 1] = total
        z_out[i + 1] = z


@numba.njit(cache=True, nogil=True)
def replay_path(black, total, lower, upper, x_values, b_values, r_values,
                black_out, total_out, z_out):
    """Recomputes the state series from recorded draws"""
    z = black / total
    black_out[0] = black
    total_out[0] = total
    z_out[0] = z

    for i in range(x_values.shape[0]):
        black, total = _reinforce(x_values[i], z, black, total, lower, upper, b_values[i], r_values[i])
        z = black / total
        black_out[i + 1] = black
        total_out[i + 1] = total
        z_out[i + 1] = z


@numba.njit(cache=True, nogil=True)
def advance_path(black, total, lower, upper, uniforms, b_values, r_values,
                 step_offset, checkpoints, z_at, tail_start):
    """
    Runs a path without storing it.

    `checkpoints` are absolute step indices in increasing order; the
    proportion after each of them is written to `z_at`. Steps are numbered
    from `step_offset + 1`. The proportions after steps > tail_start are summed.

    Returns: (black, total, number of black draws, tail sum)
    """
    z = black / total
    ones = 0
    tail_sum = 0.0
    k = 0

    while k < checkpoints.shape[0] and checkpoints[k] <= step_offset:
        z_at[k] = z
        k += 1

    for i in range(uniforms.shape[0]):
        x = 1 if uniforms[i] < z else 0
        black, total = _reinforce(x, z, black, total, lower, upper, b_values[i], r_values[i])
        z = black / total
        ones += x

        current = step_offset + i + 1
        while k < checkpoints.shape[0] and checkpoints[k] == current:
            z_at[k] = z
            k += 1
        if current > tail_start:
            tail_sum += z

    return black, total, ones, tail_sum