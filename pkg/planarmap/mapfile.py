"""
Map Files
Line-oriented text format: header, one line per dart, then hole and mark lines
"""

from typing import TextIO

from planarmap.map import MapError, PlanarMap

HEADER = "hypermap-map"


def dumps(pmap: PlanarMap) -> str:
    """
    Serialize a map

    Format:
        hypermap-map darts <n> root <r>
        <id> <alpha(id)> <sigma(id)>      (one line per dart)
        hole <role> <d_0> ... <d_k>       (darts of the hole face in phi order)
        mark <key> <d_0> ... <d_k>
    """
    lines = [f"{HEADER} darts {pmap.num_darts} root {pmap.root}"]
    for d in range(pmap.num_darts):
        lines.append(f"{d} {pmap.alpha[d]} {pmap.sigma(d)}")
    for role in sorted(pmap.holes):
        lines.append("hole " + role + " " + " ".join(map(str, pmap.hole_cycle(role))))
    for key in sorted(pmap.marked):
        lines.append("mark " + key + " " + " ".join(map(str, pmap.marked[key])))
    return "\n".join(lines) + "\n"


def loads(text: str) -> PlanarMap:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    if not rows or rows[0][0] != HEADER:
        raise MapError("missing map header")
    head = rows[0]
    try:
        n = int(head[head.index("darts") + 1])
        root = int(head[head.index("root") + 1])
    except (ValueError, IndexError) as e:
        raise MapError(f"malformed map header: {' '.join(head)}") from e
    alpha, sigma = [0] * n, [0] * n
    holes, marked = {}, {}
    for row in rows[1:]:
        if row[0] == "hole":
            holes[row[1]] = int(row[2])
        elif row[0] == "mark":
            marked[row[1]] = [int(x) for x in row[2:]]
        else:
            d, a, s = (int(x) for x in row)
            alpha[d], sigma[d] = a, s
    phi = [sigma[alpha[d]] for d in range(n)]
    return PlanarMap(alpha, phi, root, holes, marked)


def write_map(pmap: PlanarMap, out: TextIO) -> None:
    out.write(dumps(pmap))


def read_map(path: str) -> PlanarMap:
    with open(path) as f:
        return loads(f.read())


def save_map(pmap: PlanarMap, path: str) -> str:
    with open(path, "w") as f:
        f.write(dumps(pmap))
    return path
