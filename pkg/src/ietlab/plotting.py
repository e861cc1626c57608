"""SVG figures.  Output is byte-stable: fixed hash salt, no date stamp."""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams["svg.hashsalt"] = "ietlab"
plt.rcParams["svg.fonttype"] = "path"

_META = {"Date": None, "Creator": "ietlab"}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_META)
    plt.close(fig)


def plot_conjugacy(sample, path):
    xs = [r[0] for r in sample.rows()] + [1.0]
    hs = [r[1] for r in sample.rows()] + [1.0]
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.plot(xs, hs, lw=0.8)
    ax.plot([0, 1], [0, 1], lw=0.5, ls="--", color="grey")
    ax.set_xlabel("x")
    ax.set_ylabel(f"h_{sample.level}(x)")
    ax.set_title(f"semi-conjugacy, level {sample.level}")
    _save(fig, path)


def plot_slope_histogram(sample, path, bins=40):
    import numpy as np

    sl = np.log10(np.array(sample.slopes))
    w = np.array([float(v) for v in sample.widths])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.hist(sl, bins=bins, weights=w)
    ax.set_xlabel("log10 local slope of h")
    ax.set_ylabel("Lebesgue mass")
    ax.set_title(f"slopes at level {sample.level}")
    _save(fig, path)


def plot_profile_trend(levels, masses, path, eps=0.1):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(levels, masses, marker="o")
    ax.set_xlabel("level")
    ax.set_ylabel(f"mass of slope < {eps}")
    _save(fig, path)


def plot_lyapunov(running, path):
    steps = [s for s, _ in running]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    if running:
        for i in range(len(running[0][1])):
            ax.plot(steps, [sorted(v, reverse=True)[i] for _, v in running], lw=0.8)
    ax.set_xlabel("Zorich steps")
    ax.set_ylabel("exponent estimate")
    _save(fig, path)


def plot_wandering(series, path):
    import numpy as np

    fw = np.array([float(v) for v in series.forward])
    bw = np.array([float(v) for v in series.backward])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(np.arange(1, len(fw) + 1), fw, label="forward")
    ax.plot(np.arange(0, len(bw)), bw, label="backward")
    ax.set_xlabel("|n|")
    ax.set_ylabel("partial sum of exp(S_n)")
    ax.legend()
    _save(fig, path)
