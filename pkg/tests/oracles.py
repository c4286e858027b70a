"""Independent reference implementations used to derive and check test values.

Nothing here calls into the code under test except where an oracle is
defined relative to it (the blend-0 nearest-neighbour rule uses the solved
per-attribute scales).
"""

from __future__ import annotations

import json
import math
import re
import xml.etree.ElementTree as ET
from collections import Counter

LABEL_ORDER = ("Splash", "Advertisement", "Login", "Portal", "Mail", "Browser", "TodoList")
DRAWER_WORDS = {"drawer", "menu", "sidebar"}


# -- feature counting -----------------------------------------------------------


def _tokens(resource_id: str) -> set[str]:
    name = resource_id.split(":id/")[-1]
    out = set()
    for chunk in re.split(r"[^A-Za-z0-9]+", name):
        # camel-case humps: "closeButton" -> close, Button
        for part in re.findall(r"[A-Z]?[a-z0-9]+|[A-Z]+(?![a-z])", chunk):
            out.add(part.lower())
    return out


def _count(nodes: list[dict], height: int) -> list[int]:
    """``nodes`` carry: cls, rid, y1, y2, click, long, scroll, edit, horiz."""
    v = [0] * 15
    drawer = 0
    for n in nodes:
        centre2 = n["y1"] + n["y2"]  # twice the centre, to stay in integers
        band = 0 if centre2 < 0.4 * height else (1 if centre2 < 1.6 * height else 2)
        if n["click"]:
            v[band] += 1
        if n["scroll"]:
            v[(3 if n["horiz"] else 6) + band] += 1
        if n["edit"]:
            v[9 + band] += 1
        if n["long"]:
            v[13] += 1
        if "DrawerLayout" in n["cls"] or (n["click"] and _tokens(n["rid"]) & DRAWER_WORDS):
            drawer = 1
    v[12] = len(nodes)
    v[14] = drawer
    return v


def _class_horizontal(cls: str) -> bool:
    return "Horizontal" in cls or "ViewPager" in cls


def features_from_xml_text(text: str) -> list[int]:
    root = ET.fromstring(text)
    top = root if root.tag == "node" else root.find("node")
    nodes = []
    for el in top.iter("node"):
        x1, y1, x2, y2 = map(int, re.findall(r"\d+", el.get("bounds")))
        cls = el.get("class", "")
        nodes.append(
            dict(
                cls=cls,
                rid=el.get("resource-id", ""),
                y1=y1,
                y2=y2,
                click=el.get("clickable") == "true",
                long=el.get("long-clickable") == "true",
                scroll=el.get("scrollable") == "true",
                edit="EditText" in cls,
                horiz=_class_horizontal(cls),
            )
        )
    height = int(re.findall(r"\d+", top.get("bounds"))[3])
    return _count(nodes, height)


def features_from_native_text(text: str) -> list[int]:
    doc = json.loads(text)
    nodes = []

    def walk(obj: dict) -> None:
        cls = obj["widget_class"]
        orient = obj.get("scroll_orientation", "unspecified")
        nodes.append(
            dict(
                cls=cls,
                rid=obj.get("resource_id", ""),
                y1=obj["bounds"][1],
                y2=obj["bounds"][3],
                click=obj.get("clickable", False),
                long=obj.get("long_clickable", False),
                scroll=obj.get("scrollable", False),
                edit=obj.get("editable", "EditText" in cls),
                horiz=orient == "horizontal" or _class_horizontal(cls),
            )
        )
        for child in obj.get("children", []):
            walk(child)

    walk(doc["root"])
    return _count(nodes, doc["screen_height"])


def features_from_file(path: str) -> list[int]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return features_from_native_text(text) if path.endswith(".json") else features_from_xml_text(text)


def node_count(path: str) -> int:
    return features_from_file(path)[12]


# -- K* reference -----------------------------------------------------------------


def _effective(shifted: list[float], s: float) -> float:
    w = [math.exp(-d / s) for d in shifted]
    return sum(w) ** 2 / sum(x * x for x in w)


def reference_scale(distances: list[float], blend: float) -> float:
    """Kernel scale for one attribute, by plain bisection on log(s)."""
    dmin = min(distances)
    shifted = [d - dmin for d in distances]
    n = len(shifted)
    n0 = sum(1 for d in shifted if d == 0.0)
    if n0 == n:
        return math.inf
    target = n0 + blend / 100.0 * (n - n0)
    lo, hi = math.log(1e-9), math.log(1e15)
    for _ in range(400):
        mid = (lo + hi) / 2
        if _effective(shifted, math.exp(mid)) < target:
            lo = mid
        else:
            hi = mid
    return math.exp((lo + hi) / 2)


def reference_kstar(rows, labels, query, blend):
    """(label, scores) with labels as strings in LABEL_ORDER."""
    n_attr = len(query)
    logw = [0.0] * len(rows)
    for j in range(n_attr):
        d = [abs(r[j] - query[j]) for r in rows]
        s = reference_scale(d, blend)
        if math.isinf(s):
            continue
        dmin = min(d)
        for i in range(len(rows)):
            logw[i] -= (d[i] - dmin) / s
    top = max(logw)
    totals = Counter()
    for lw, lab in zip(logw, labels):
        totals[lab] += math.exp(lw - top)
    norm = sum(totals.values())
    scores = {lab: totals[lab] / norm for lab in LABEL_ORDER}
    best = max(scores.values())
    return next(lab for lab in LABEL_ORDER if scores[lab] == best), scores


def weighted_l1_nearest(rows, labels, query, scales) -> str:
    """1-NN under distance sum_j |x_j - q_j| / s_j (infinite scale contributes 0)."""
    best_i, best_d = None, math.inf
    for i, r in enumerate(rows):
        d = sum(abs(r[j] - query[j]) / s for j, s in enumerate(scales) if not math.isinf(s))
        if d < best_d:
            best_i, best_d = i, d
    return labels[best_i]


# -- k-NN and majority --------------------------------------------------------------


def brute_knn(rows, labels, query, k) -> str:
    d = [(math.dist(r, query), i) for i, r in enumerate(rows)]
    d.sort()
    votes = Counter(labels[i] for _, i in d[:k])
    top = max(votes.values())
    return next(lab for lab in LABEL_ORDER if votes.get(lab, 0) == top)


# -- MDL information gain ------------------------------------------------------------


def _h(counts) -> float:
    n = sum(counts)
    return -sum(c / n * math.log2(c / n) for c in counts if c)


def _fayyad_irani(pairs) -> list[float]:
    """Accepted cut values for sorted (value, label) pairs."""
    n = len(pairs)
    classes = Counter(lab for _, lab in pairs)
    if n < 2 or len(classes) < 2:
        return []
    best = None
    left = Counter()
    for i in range(1, n):
        left[pairs[i - 1][1]] += 1
        if pairs[i - 1][0] == pairs[i][0]:
            continue
        right = classes - left
        e = (i * _h(left.values()) + (n - i) * _h(right.values())) / n
        if best is None or e < best[0]:
            best = (e, i, Counter(left), right)
    if best is None:
        return []
    e_split, i, lc, rc = best
    e = _h(classes.values())
    k, k1, k2 = len(classes), len(+lc), len(+rc)
    e1, e2 = _h(lc.values()), _h(rc.values())
    gain = e - e_split
    delta = math.log2(3**k - 2) - (k * e - k1 * e1 - k2 * e2)
    if gain <= (math.log2(n - 1) + delta) / n:
        return []
    cut = (pairs[i - 1][0] + pairs[i][0]) / 2
    return _fayyad_irani(pairs[:i]) + [cut] + _fayyad_irani(pairs[i:])


def reference_info_gain(values, labels) -> float:
    pairs = sorted(zip(values, labels), key=lambda p: p[0])
    cuts = _fayyad_irani(pairs)
    bins: dict[int, Counter] = {}
    for v, lab in zip(values, labels):
        b = sum(1 for c in cuts if v > c)
        bins.setdefault(b, Counter())[lab] += 1
    n = len(labels)
    cond = sum(sum(c.values()) / n * _h(c.values()) for c in bins.values())
    return max(0.0, _h(Counter(labels).values()) - cond)
