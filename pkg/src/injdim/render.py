"""JSON and aligned-text rendering of command results.

The text form is a list of rows ``label  v1  v2 ...``; :func:`parse_text`
recovers the rows so tests can compare them with the JSON twin.
"""

from __future__ import annotations

import json


def to_json(result: dict) -> str:
    return json.dumps(result, indent=2, sort_keys=True) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v).replace(" ", "")


def text_rows(result: dict) -> list[tuple[str, list[str]]]:
    """The rows shown in text mode, derived from the JSON result only."""
    cmd = result["command"]
    rows: list[tuple[str, list[str]]] = [("command", [cmd])]
    if "algebra" in result:
        rows.append(("algebra", [_fmt(result["algebra"])]))
    if "target" in result:
        rows.append(("target", [_fmt(result["target"])]))
    if "bound" in result:
        rows.append(("bound", [_fmt(result["bound"])]))
    if cmd == "resolve":
        degs = result["degrees"]
        rows.append(("degree", [_fmt(d) for d in degs]))
        rows.append(("betti", [_fmt(b) for b in result["betti"]]))
        rows.append(("complete", [_fmt(result["complete"])]))
        rows.append(("pd", [result["pd"]["text"]]))
    elif cmd == "ext":
        rows.append(("degree", [_fmt(n) for n in range(len(result["ext_table"]))]))
        rows.append(("ext", [_fmt(d) for d in result["ext_table"]]))
    elif cmd == "operators":
        rows.append(("degree", [_fmt(n) for n in range(len(result["ext_table"]))]))
        rows.append(("ext", [_fmt(d) for d in result["ext_table"]]))
        for op in result["operators"]:
            ranks = op["ranks"]
            rows.append((f"rank[{op['label']}]", [_fmt(ranks[str(n)]) for n in sorted(map(int, ranks))]))
        rows.append(("commute", [_fmt(result["commute"])]))
    elif cmd == "koszul":
        rows.append(("ops", [_fmt(o) for o in result["ops"]]))
        rows.append(("degree", [_fmt(d) for d in result["degrees"]]))
        rows.append(("rank", [_fmt(r) for r in result["ranks"]]))
        rows.append(("pd", [result["pd"]["text"]]))
    elif cmd == "check-fid":
        rows.append(("degree", [_fmt(n) for n in range(len(result["ext_table"]))]))
        rows.append(("ext", [_fmt(d) for d in result["ext_table"]]))
        crit = result["criterion"]
        rows.append(("operators", [result["operators"]]))
        rows.append(("status", [crit["status"]]))
        rows.append(("criterion", [crit["fired"]]))
        nil = crit["nilpotency"]
        rows.append(("nilpotency", [",".join(f"{k}={_fmt(nil[k])}" for k in sorted(nil)) or "-"]))
        rows.append(("oracle", [result["oracle"]["text"]]))
        rows.append(("consistent", [_fmt(result["consistent"])]))
        rows.append(("verdict", [result["verdict"]]))
    elif cmd == "verify":
        counts = result["counts"]
        for key in sorted(counts):
            rows.append((key, [_fmt(counts[key])]))
        rows.append(("koszul_failures", [_fmt(sum(1 for k in result["koszul"] if not k["finite"]))]))
        rows.append(("violations", [_fmt(len(result["violations"]))]))
    return rows


def render_text(result: dict) -> str:
    rows = text_rows(result)
    width = max(len(label) for label, _ in rows)
    ncols = max((len(v) for _, v in rows), default=0)
    colw = [0] * ncols
    for label, vals in rows:
        if len(vals) > 1:
            for i, v in enumerate(vals):
                colw[i] = max(colw[i], len(v))
    lines = []
    for label, vals in rows:
        if len(vals) > 1:
            cells = [v.rjust(colw[i]) for i, v in enumerate(vals)]
        else:
            cells = list(vals)
        lines.append((label.ljust(width) + "  " + "  ".join(cells)).rstrip())
    if result["command"] == "verify":
        lines.append(f"{len(result['violations'])} violations")
    return "\n".join(lines) + "\n"


def parse_text(text: str) -> dict[str, list[str]]:
    """Rows of a rendered table, keyed by label."""
    out = {}
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[-1] == "violations" and len(parts) == 2 and parts[0].isdigit():
            continue
        out[parts[0]] = parts[1:]
    return out
