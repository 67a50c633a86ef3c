import io
import os
import math
from typing import List, Optional, Sequence, Tuple

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from PIL import Image

from .central_configs import section_restpoints
from .config import PNG_MAX_SIZE, PORTRAIT_DPI, PORTRAIT_SIZE, SVG_HASH_SALT
from .logger import setup_logger
from .potentials import Homogeneity, SectionKind, arm_positions, nearest_arm, potential_section

logger = setup_logger("image_handler")

# Extensions the portrait writer understands
ALLOWED_EXTENSIONS = {'.svg', '.png'}

# (label, x samples, v samples)
PortraitSample = Tuple[str, np.ndarray, np.ndarray]


class PortraitError(Exception):
    pass


def _boundary(section: SectionKind, h: Homogeneity, low: float, high: float, points: int = 2000):
    xs = np.linspace(low, high, points)
    vs = np.full_like(xs, np.nan)
    for i, x in enumerate(xs):
        # U blows up at the arms; leave a gap there
        if abs(x - nearest_arm(section, x)) > 1e-3:
            vs[i] = math.sqrt(2.0 * potential_section(section, h, x))
    return xs, vs


def render_portrait(samples: Sequence[PortraitSample], section: SectionKind, h: Homogeneity,
                    path: Optional[str] = None, title: Optional[str] = None):
    """
    Draws the (x, v) projection of trajectories on the covering chart of a
    section: arms as vertical lines, restpoints as dots, and the graph
    boundary v = ±√(2U) the projected flow lives inside.

    :return: the matplotlib Figure (closed by the caller, or saved to `path`)
    """
    if not samples:
        raise PortraitError("Nothing to plot: no trajectories given")
    plt.rcParams["svg.hashsalt"] = SVG_HASH_SALT
    low = min(float(np.min(x)) for _, x, _ in samples)
    high = max(float(np.max(x)) for _, x, _ in samples)
    pad = 0.05 * max(high - low, 0.5)
    low, high = low - pad, high + pad
    vmax = max(float(np.max(np.abs(v))) for _, _, v in samples)

    fig, ax = plt.subplots(figsize=PORTRAIT_SIZE)
    xs, vs = _boundary(section, h, low, high)
    ax.plot(xs, vs, color="0.6", linewidth=0.6)
    ax.plot(xs, -vs, color="0.6", linewidth=0.6)

    for arm in arm_positions(section, low, high):
        ax.axvline(arm, color="0.3", linestyle="--", linewidth=0.8)

    rest = section_restpoints(section, h, low, high)
    if rest:
        vbar = np.array([math.sqrt(2.0 * potential_section(section, h, x)) for x in rest])
        ax.scatter(rest + rest, np.concatenate([vbar, -vbar]), s=14, color="black", zorder=3)

    for label, x, v in samples:
        ax.plot(x, v, linewidth=1.2, label=label)

    ax.set_xlim(low, high)
    ax.set_ylim(-1.3 * vmax - 0.1, 1.3 * vmax + 0.1)
    ax.set_xlabel("theta" if section is SectionKind.PLANAR else "psi")
    ax.set_ylabel("v")
    ax.set_title(title or f"{section.value} section, alpha = {h.alpha:g}")
    if any(label for label, _, _ in samples):
        ax.legend(loc="best", fontsize=8)

    if path:
        _, ext = os.path.splitext(path)
        if ext.lower() not in ALLOWED_EXTENSIONS:
            plt.close(fig)
            raise PortraitError(f"Unsupported portrait format '{ext}'")
        fig.savefig(path, format=ext[1:].lower(), metadata={"Date": None} if ext.lower() == ".svg" else None,
                    dpi=PORTRAIT_DPI)
        logger.info(f"Portrait written to {path}")
    return fig


def export_png(fig, output_path: str, max_size: Tuple[int, int] = PNG_MAX_SIZE) -> bool:
    """
    Rasterizes a portrait through the Agg canvas and saves it with Pillow,
    downscaled when it exceeds max_size.
    """
    try:
        buffer = io.BytesIO()
        fig.savefig(buffer, format="png", dpi=PORTRAIT_DPI)
        buffer.seek(0)
        with Image.open(buffer) as img:
            width, height = img.size
            if width > max_size[0] or height > max_size[1]:
                img.thumbnail(max_size)
                logger.debug(f"Portrait resized from {width}x{height} to {img.size}")
            img.save(output_path, format="PNG", optimize=True)
    except (OSError, ValueError) as e:
        logger.error(f"Failed to export PNG: {e}")
        return False
    if not validate_png(output_path):
        logger.error(f"Written PNG {output_path} does not decode")
        return False
    logger.info(f"PNG portrait written to {output_path}")
    return True


def validate_png(file_path: str) -> bool:
    """Checks that a file exists and decodes as an image."""
    if not os.path.exists(file_path):
        return False
    try:
        with Image.open(file_path) as img:
            img.verify()
        return True
    except Exception:
        return False


def samples_from_table(header: List[str], data: np.ndarray, label: str = "") -> PortraitSample:
    """Picks the (x, v) columns out of a section trajectory table."""
    try:
        ix, iv = header.index("x"), header.index("v")
    except ValueError as e:
        raise PortraitError(f"Trajectory table has no x/v columns: {header}") from e
    return label, data[:, ix], data[:, iv]


def close_portrait(fig):
    plt.close(fig)
