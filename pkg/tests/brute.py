"""Independent per-sample oracles, written as literal loops so they share no
code path with the vectorized library."""

import math

TWO_PI = 2.0 * math.pi


def sample_at(a, i, pad_mode):
    n = len(a)
    if 0 <= i < n:
        return a[i]
    if pad_mode == "cyclic":
        return a[i % n]
    return 0.0


def equalize_list(a, lo, hi):
    mn = min(a)
    mx = max(a)
    if mx == mn:
        return [lo] * len(a)
    return [(v - mn) / (mx - mn) * (hi - lo) + lo for v in a]


def mean(a):
    return sum(a) / len(a)


def avg_denominator(a):
    d = abs(mean(a))
    if d > 1e-12:
        return d
    return mean([abs(v) for v in a])


def masked_value(a, n, taps, pad_mode):
    half = (len(taps) - 1) // 2
    return sum(taps[k + half] * sample_at(a, n + k, pad_mode) for k in range(-half, half + 1))


def derivative_taps(m):
    half = (m - 1) // 2
    return [-1.0 / (m - 1)] * half + [0.0] + [1.0 / (m - 1)] * half


def window_taps(m):
    return [1.0 / m] * m


def brute_fit_overlap(samples, variant, m=3, pad_mode="cyclic"):
    a = [float(v) for v in samples]
    n = len(a)
    out = []
    if variant == "raw":
        for i in range(n):
            num = abs((sample_at(a, i + 1, pad_mode) - sample_at(a, i - 1, pad_mode)) / 2.0)
            out.append(num / abs(a[i]) / TWO_PI)
    elif variant == "equalized":
        eq = equalize_list(a, 1.0, 2.0)
        for i in range(n):
            num = abs((sample_at(eq, i + 1, pad_mode) - sample_at(eq, i - 1, pad_mode)) / 2.0)
            out.append(num / eq[i] / TWO_PI)
    elif variant == "averaged":
        den = avg_denominator(a)
        for i in range(n):
            num = abs((sample_at(a, i + 1, pad_mode) - sample_at(a, i - 1, pad_mode)) / 2.0)
            out.append(num / den / TWO_PI)
    elif variant == "mask_eq":
        eq = equalize_list(a, 1.0, 2.0)
        dt = derivative_taps(m)
        wt = window_taps(m)
        for i in range(n):
            num = abs(masked_value(eq, i, dt, pad_mode))
            den = masked_value(eq, i, wt, pad_mode)
            out.append(num / den / TWO_PI)
    elif variant == "mask_av":
        dt = derivative_taps(m)
        den = avg_denominator(a)
        for i in range(n):
            out.append(abs(masked_value(a, i, dt, pad_mode)) / den / TWO_PI)
    elif variant == "diff_eq":
        eq = equalize_list(a, 1.0, 2.0)
        for i in range(n):
            num = abs(sample_at(eq, i + 1, pad_mode) - eq[i])
            out.append(num / eq[i] / TWO_PI)
    elif variant == "diff_av":
        den = avg_denominator(a)
        for i in range(n):
            num = abs(sample_at(a, i + 1, pad_mode) - a[i])
            out.append(num / den / TWO_PI)
    else:
        raise ValueError(variant)
    return out


def brute_subbands(a):
    l = [(a[2 * k] + a[2 * k + 1]) / 2.0 for k in range(len(a) // 2)]
    h = [(-a[2 * k] + a[2 * k + 1]) / 2.0 for k in range(len(a) // 2)]
    return l, h


def brute_fit_nonoverlap(samples, variant):
    a = [float(v) for v in samples]
    if variant == "eq":
        eq = equalize_list(a, 1.0, 2.0)
        l, h = brute_subbands(eq)
        return [abs(h[k]) / l[k] / TWO_PI for k in range(len(l))]
    l, h = brute_subbands(a)
    den = avg_denominator(l)
    return [abs(h[k]) / den / TWO_PI for k in range(len(l))]


def brute_fit_image_pixel(image, r, c, mask_kind, m, variant):
    """One pixel of the 2D overlap estimate, literal double loop."""
    rows = len(image)
    cols = len(image[0])

    def px(plane, rr, cc):
        if 0 <= rr < rows and 0 <= cc < cols:
            return plane[rr][cc]
        return 0.0

    half = (m - 1) // 2
    if variant == "equalized":
        flat = [v for row in image for v in row]
        eq_flat = equalize_list(flat, 1.0, 256.0)
        plane = [eq_flat[i * cols:(i + 1) * cols] for i in range(rows)]
    else:
        plane = image

    if mask_kind == "segmental":
        dt = derivative_taps(m)
        gh = sum(dt[k + half] * px(plane, r, c + k) for k in range(-half, half + 1))
        gv = sum(dt[k + half] * px(plane, r + k, c) for k in range(-half, half + 1))
        mag = math.hypot(gh, gv)
    else:
        total = 0.0
        for p in range(-half, half + 1):
            for q in range(-half, half + 1):
                if p + q < 0:
                    w = -1.0
                elif p + q > 0:
                    w = 1.0
                else:
                    w = 0.0
                total += w * px(plane, r + p, c + q)
        mag = abs(total / ((m - 1) * m))

    if variant == "equalized":
        den = plane[r][c]
    elif variant == "averaged":
        den = abs(mean([v for row in image for v in row]))
    else:
        raise ValueError(variant)
    return mag / den / TWO_PI
