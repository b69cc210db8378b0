# Compiled inner loops for joint PV-DBOW / Skip-gram training with negative sampling.
# Every function releases the GIL so document partitions can train on threads.

import numpy as np
from numba import njit

_MAX_EXP = 30.0


@njit(cache=True, nogil=True)
def _next_uniform(state):
    # xorshift64*; state is a length-1 uint64 array mutated in place
    x = state[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[0] = x
    r = x * np.uint64(2685821657736338717)
    return (r >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True, nogil=True)
def _log_sigmoid(f):
    if f >= 0:
        return -np.log1p(np.exp(-f))
    return f - np.log1p(np.exp(f))


@njit(cache=True, nogil=True)
def sgns_step(v, out, targets, n_targets, lr, work):
    """One negative-sampling step for input row `v`; `targets[0]` is the true word.

    Updates `v` and the touched rows of `out` in place and returns the loss
    -log s(u_t.v) - sum log s(-u_n.v) evaluated before the update.
    """
    dim = v.shape[0]
    for d in range(dim):
        work[d] = 0.0
    loss = 0.0
    for i in range(n_targets):
        row = out[targets[i]]
        f = 0.0
        for d in range(dim):
            f += v[d] * row[d]
        label = 1.0 if i == 0 else 0.0
        if label > 0:
            loss -= _log_sigmoid(f)
        else:
            loss -= _log_sigmoid(-f)
        fc = min(max(f, -_MAX_EXP), _MAX_EXP)
        g = (label - 1.0 / (1.0 + np.exp(-fc))) * lr
        for d in range(dim):
            work[d] += g * row[d]
            row[d] += g * v[d]
    for d in range(dim):
        v[d] += work[d]
    return loss


@njit(cache=True, nogil=True)
def _fill_targets(word, negatives, cum_table, state, targets):
    targets[0] = word
    n = 1
    last = cum_table.shape[0] - 1
    for _ in range(negatives):
        k = np.searchsorted(cum_table, _next_uniform(state), side="right")
        if k > last:
            k = last
        if k == word:
            continue
        targets[n] = k
        n += 1
    return n


@njit(cache=True, nogil=True)
def train_documents(doc_ids, offsets, tokens, keep_prob, cum_table,
                    word_vecs, doc_vecs, out_vecs, window, negatives,
                    lr_start, lr_end, work_total, work_done, state):
    """Train one pass over `doc_ids`: a DBOW sweep then a Skip-gram sweep per document.

    Returns (summed loss, number of negative-sampling steps, updated work_done).
    The learning rate decays linearly with `work_done / work_total`, where work
    is counted in retained tokens before subsampling.
    """
    dim = word_vecs.shape[1]
    work = np.zeros(dim, dtype=word_vecs.dtype)
    targets = np.empty(negatives + 1, dtype=np.int64)
    max_len = 0
    for di in doc_ids:
        max_len = max(max_len, offsets[di + 1] - offsets[di])
    sentence = np.empty(max_len, dtype=np.int64)
    loss = 0.0
    steps = 0
    for di in doc_ids:
        start = offsets[di]
        end = offsets[di + 1]
        frac = work_done / work_total
        if frac > 1.0:
            frac = 1.0
        lr = lr_start - (lr_start - lr_end) * frac
        n = 0
        for p in range(start, end):
            w = tokens[p]
            kp = keep_prob[w]
            if kp < 1.0 and kp < _next_uniform(state):
                continue
            sentence[n] = w
            n += 1
        dvec = doc_vecs[di]
        for i in range(n):
            m = _fill_targets(sentence[i], negatives, cum_table, state, targets)
            loss += sgns_step(dvec, out_vecs, targets, m, lr, work)
            steps += 1
        for i in range(n):
            center = word_vecs[sentence[i]]
            lo = max(0, i - window)
            hi = min(n, i + window + 1)
            for j in range(lo, hi):
                if j == i:
                    continue
                m = _fill_targets(sentence[j], negatives, cum_table, state, targets)
                loss += sgns_step(center, out_vecs, targets, m, lr, work)
                steps += 1
        work_done += end - start
    return loss, steps, work_done
