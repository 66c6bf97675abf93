"""
SVG Diagrams

Ford-circle pictures of the cut-locus complex and of approximation runs,
drawn with matplotlib and returned as SVG text. Output is reproducible:
the SVG id salt is fixed and no date is written.
"""

import io
from typing import Iterable, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Circle, Polygon  # noqa: E402

from cuspapprox.core.moebius import BoundaryPoint  # noqa: E402
from cuspapprox.core.quadint import QuadInt  # noqa: E402
from cuspapprox.core.result import FordComplex, GoodSequence  # noqa: E402

RC = {"svg.hashsalt": "cuspapprox", "svg.fonttype": "none", "font.size": 8}
LW = 0.6


def _horoball_patch(center: complex, norm_c: int, modular: bool, **style) -> Circle:
    """Ford circle on the real line, or the shadow of a horoball in the plane."""
    radius = 1.0 / (2.0 * norm_c)
    if modular:
        return Circle((center.real, radius), radius, **style)
    return Circle((center.real, center.imag), radius, **style)


def _to_svg(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def _frame(ax, modular: bool, corners: Iterable[complex]) -> None:
    pts = list(corners)
    xs = [z.real for z in pts]
    ys = [z.imag for z in pts]
    pad = 0.15
    ax.set_xlim(min(xs) - pad, max(xs) + pad)
    if modular:
        ax.set_ylim(-0.05, max(1.1, max(ys) + pad))
    else:
        ax.set_ylim(min(ys) - pad, max(ys) + pad)
    ax.set_aspect("equal")


def ford_svg(complex_: FordComplex, centers: Iterable[Tuple[BoundaryPoint, QuadInt]]) -> str:
    """
    Ford circles of radius 1/(2N(c)) at the horoball centers, the footprints
    of the cut-locus cells and their summits.
    """
    modular = complex_.ring == 0
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.0, 5.0))
        corners = []
        for point, c in centers:
            z = point.to_complex()
            ax.add_patch(_horoball_patch(z, c.norm(), modular, fill=False, linewidth=LW, edgecolor="tab:blue"))
            corners.append(z)
        for cell in complex_.cells:
            vertices = cell.footprint_complex
            if modular:
                xs = [z.real for z in vertices]
                ax.plot(xs, [0.0] * len(xs), color="black", linewidth=1.2 * LW)
                ax.plot([cell.summit.z.real], [cell.summit.t], marker="^", color="tab:red")
            else:
                ax.add_patch(
                    Polygon([(z.real, z.imag) for z in vertices], closed=True, fill=False,
                            linewidth=1.2 * LW, edgecolor="black")
                )
                ax.plot([cell.summit.z.real], [cell.summit.z.imag], marker="^", color="tab:red")
            corners.extend(vertices)
        _frame(ax, modular, corners or [0j, 1 + 0j])
        ax.set_title(f"Cut locus, d={complex_.ring}, |c| <= {complex_.c_max:g}")
        return _to_svg(fig)


def approx_svg(seq: GoodSequence, xi: complex) -> str:
    """Horoball chain of a good approximating sequence descending to ξ."""
    modular = seq.ring == 0
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.0, 5.0))
        corners = [xi]
        for step in seq.steps:
            z = step.z.to_complex()
            ax.add_patch(_horoball_patch(z, step.q.norm(), modular, fill=False, linewidth=LW, edgecolor="tab:green"))
            ax.annotate(str(step.n), (z.real, z.imag if not modular else 1.0 / (2.0 * step.q.norm())),
                        fontsize=6, ha="center")
            corners.append(z)
        ax.plot([xi.real], [0.0 if modular else xi.imag], marker="x", color="tab:red")
        span = max([abs(z - xi) for z in corners[1:]] + [0.5])
        box = [xi - span, xi + span]
        if not modular:
            box += [xi + 1j * span, xi - 1j * span]
        _frame(ax, modular, box)
        ax.set_title(f"Good approximating sequence, d={seq.ring}")
        return _to_svg(fig)
