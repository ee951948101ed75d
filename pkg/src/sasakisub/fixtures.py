"""Generators for the shipped model files.

``python3 -m sasakisub.fixtures`` rewrites ``models/*.model``; the test
suite checks the shipped files are identical to what these produce.
"""

from __future__ import annotations

from pathlib import Path


def _sasakian_block(n: int, printed: bool = False) -> list[str]:
    """R^(2n+1) with eta = (dz - sum y_i dx_i)/2, xi = 2 d/dz.

    The metric is eta⊗eta + (1/4) sum(dx_i^2 + dy_i^2).  With ``printed``
    the eta⊗eta term is also scaled by 1/4, which breaks eta = g(., xi).
    """
    xs = [f"x{i}" for i in range(1, n + 1)]
    ys = [f"y{i}" for i in range(1, n + 1)]
    c = "/16" if printed else "/4"
    zz = "1/16" if printed else "1/4"
    lines = ["[source]", "coordinates = " + " ".join(xs + ys + ["z"]), "", "[source.metric]"]
    for i in range(n):
        for j in range(i, n):
            base = "1/4 + " if i == j else ""
            lines.append(f"{xs[i]} {xs[j]} = {base}{ys[i]}*{ys[j]}{c}")
        lines.append(f"{xs[i]} z = -{ys[i]}{c}")
    for i in range(n):
        lines.append(f"{ys[i]} {ys[i]} = 1/4")
    lines.append(f"z z = {zz}")
    lines += ["", "[source.phi]"]
    for i in range(n):
        lines.append(f"{ys[i]} {xs[i]} = -1")
        lines.append(f"{xs[i]} {ys[i]} = 1")
        lines.append(f"z {ys[i]} = {ys[i]}")
    lines += ["", "[source.xi]", "z = 2", "", "[source.eta]"]
    for i in range(n):
        lines.append(f"{xs[i]} = -{ys[i]}/2")
    lines += ["z = 1/2", ""]
    return lines


def _header(name: str, description: str) -> list[str]:
    return ["[model]", f"name = {name}", f"description = {description}", ""]


def _sample(points: int = 50, seed: int = 42) -> list[str]:
    return ["[sample]", "low = -0.9", "high = 0.9", f"points = {points}", f"seed = {seed}", ""]


def example1(n: int = 2, printed: bool = False) -> str:
    if printed:
        name, desc = "example1_printed", "Sasakian R^5 with the 1/4 coefficient also on eta⊗eta (negative control)"
    else:
        name = "example1" if n == 2 else f"example1_n{n}"
        desc = f"Sasakian R^{2 * n + 1} with its standard contact structure"
    return "\n".join(_header(name, desc) + _sasakian_block(n, printed) + _sample())


def example2() -> str:
    lines = _header("example2", "R^5 -> R^2, (x1+y1, x2+y2); xi vertical")
    lines += _sasakian_block(2)
    lines += [
        "[target]", "coordinates = u1 u2", "",
        "[target.metric]", "u1 u1 = 1/8", "u2 u2 = 1/8", "",
        "[map]", "u1 = x1 + y1", "u2 = x2 + y2", "",
    ]
    return "\n".join(lines + _sample())


def example3() -> str:
    # target metric as printed, with (y1, y2, z) renamed (u1, u2, u3)
    lines = _header("example3", "R^5 -> N in R^3, (x1+y1, x2+y2, y1^2/2+y2^2/2+z); xi horizontal")
    lines += _sasakian_block(2)
    lines += [
        "[target]", "coordinates = u1 u2 u3", "",
        "[target.metric]",
        "u1 u1 = 1/8", "u1 u2 = u1*u2/8", "u1 u3 = -u1/8",
        "u2 u2 = 1/8", "u2 u3 = -u2/8",
        "u3 u3 = 1/4", "",
        "[map]", "u1 = x1 + y1", "u2 = x2 + y2", "u3 = y1^2/2 + y2^2/2 + z", "",
        "[guard]",
        "# keeps the target metric positive definite",
        "target.spd = 2 - u1^2 - u2^2", "",
    ]
    return "\n".join(lines + _sample())


def example4() -> str:
    # target metric as printed; its coordinates (y1, y2, z, y3, w) renamed u1..u5
    lines = _header(
        "example4",
        "R^7 -> N, (x1+y1, x2+y2, y1^2/2+y2^2/2+y3^2/2+z, x3+y3, x3-y3); xi horizontal",
    )
    lines += _sasakian_block(3)
    lines += [
        "[target]", "coordinates = u1 u2 u3 u4 u5", "",
        "[target.metric]",
        "u1 u1 = 1/8", "u1 u2 = u1*u2/8", "u1 u3 = -u1/8", "u1 u4 = u1*u4/8",
        "u2 u2 = 1/8", "u2 u3 = -u2/8", "u2 u4 = u2*u4/8",
        "u3 u3 = 1/4", "u3 u4 = -u4/8",
        "u4 u4 = 1/8",
        "u5 u5 = 1/8", "",
        "[map]",
        "u1 = x1 + y1", "u2 = x2 + y2", "u3 = y1^2/2 + y2^2/2 + y3^2/2 + z",
        "u4 = x3 + y3", "u5 = x3 - y3", "",
        "[guard]",
        "# leading principal minors of the target metric",
        "target.minor3 = 2 - u1^2 - u2^2",
        "target.minor4 = 2 - u1^2 - u2^2 - u4^2 + u1^2*u2^2*u4^2", "",
    ]
    return "\n".join(lines + _sample())


def flat_projection() -> str:
    lines = _header("flat_projection", "Euclidean R^2 -> R^1, (x, y) -> x")
    lines += [
        "[source]", "coordinates = x y", "",
        "[source.metric]", "x x = 1", "y y = 1", "",
        "[target]", "coordinates = u", "",
        "[target.metric]", "u u = 1", "",
        "[map]", "u = x", "",
    ]
    return "\n".join(lines + _sample())


def warped_projection() -> str:
    lines = _header("warped_projection", "(x, y, z) -> (x, y) with a diagonal polynomial metric")
    lines += [
        "[source]", "coordinates = x y z", "",
        "[source.metric]", "x x = 1 + y^2", "y y = 1", "z z = 1 + x^2", "",
        "[target]", "coordinates = u v", "",
        "[target.metric]", "u u = 1 + v^2", "v v = 1", "",
        "[map]", "u = x", "v = y", "",
    ]
    return "\n".join(lines + _sample())


GENERATORS = {
    "example1": lambda: example1(2),
    "example1_n3": lambda: example1(3),
    "example1_printed": lambda: example1(2, printed=True),
    "example2": example2,
    "example3": example3,
    "example4": example4,
    "flat_projection": flat_projection,
    "warped_projection": warped_projection,
}


def write_all(directory: Path | None = None) -> None:
    directory = directory or Path(__file__).parent / "models"
    directory.mkdir(exist_ok=True)
    for name, gen in GENERATORS.items():
        (directory / f"{name}.model").write_text(gen(), encoding="utf-8")


if __name__ == "__main__":
    write_all()
