"""Payload builders and text renderers for the CLI.

Each command builds one JSON-ready dict; the text renderer prints from that
same dict, so both formats carry identical data.
"""
import json

from .modules import describe
from .ring import format_marks

RULE = "=" * 70


def build_ideals(report):
    return {
        "group": report.group,
        "classes": [
            {
                "index": r.index,
                "label": r.label,
                "order": r.order,
                "ideal": r.ideal.d,
                "ideal_text": str(r.ideal),
                "expected": r.expected,
                "ok": r.ok,
            }
            for r in report.rows
        ],
        "passed": report.passed,
    }


def build_complete(M, family, tower, oracle, closed, shadow):
    return {
        "group": M.group.name,
        "module": M.name,
        "family": family,
        "rank": M.rank,
        "depth": tower.depth,
        "levels": [{"n": lev.n, "free": lev.free, "torsion": list(lev.torsion)} for lev in tower.levels],
        "oracle": oracle.to_json(),
        "closed_form": closed.to_json(),
        "agree": oracle.resolved and oracle.same_shape(closed),
        "shadow": [
            {"piece": piece.family, "prime": piece.prime, "rank": piece.rank,
             "completion": str(piece.expected)}
            for piece in shadow.pieces
        ],
    }


def _summand(s, weyl_tables):
    pair = s.pair
    weyl = dict(s.structure)
    if weyl_tables:
        weyl["table"] = s.weyl.table.tolist()
    return {
        "H": {"class": pair.h_class, "label": pair.label, "order": pair.subgroup.order},
        "phi": [[h, k] for h, k in zip(pair.subgroup.members, pair.phi_images)],
        "weyl": weyl,
        "prime": s.prime,
    }


def build_decomposition(d, pi0=None, weyl_tables=False):
    doc = {
        "kind": d.kind,
        "source": d.source,
        "target": d.target,
        "summands": [_summand(s, weyl_tables) for s in d.summands],
        "pi0": pi0.to_json() if pi0 is not None else None,
    }
    if d.prime is not None:
        doc["prime"] = d.prime
    if d.leading:
        doc["leading"] = list(d.leading)
    if d.note:
        doc["note"] = d.note
    return doc


def build_crosscheck(report):
    return {
        "source": report.source,
        "target": report.target,
        "depth": report.depth,
        "decomposition": report.decomposition.to_json(),
        "closed_form": report.closed_form.to_json(),
        "tower": report.tower.to_json(),
        "status": report.status,
    }


def dump_json(payload, out):
    json.dump(payload, out, indent=2, ensure_ascii=False)
    out.write("\n")


def _descriptor_text(doc):
    if doc["confidence"] == "unresolved":
        return f"unresolved at depth {doc['unresolved_depth']}"
    padic = {int(p): b for p, b in doc["padic"].items()}
    return f"{describe(doc['free'], padic, doc['torsion'])} ({doc['confidence']})"


def print_marks(data, out):
    print(RULE, file=out)
    print(f"TABLE OF MARKS: {data['group']} (order {data['order']})", file=out)
    print(RULE, file=out)
    print(format_marks([c["label"] for c in data["classes"]], data["marks"]), file=out)
    print(file=out)
    for c in data["classes"]:
        print(f"  {c['index']:3d} {c['label']:12s} order {c['order']:4d}  {c['size']:3d} conjugates", file=out)


def print_ideals(data, out):
    print(RULE, file=out)
    print(f"FIXED-POINT IDEALS OF I({data['group']})", file=out)
    print(RULE, file=out)
    for c in data["classes"]:
        verdict = "ok" if c["ok"] else "FAIL"
        print(f"  {c['index']:3d} {c['label']:12s} |H|={c['order']:<4d} {c['ideal_text']:>8s} (d={c['ideal']})"
              f"   expected {c['expected']:8s} {verdict}", file=out)
    print(file=out)
    print("trichotomy holds" if data["passed"] else "TRICHOTOMY VIOLATED", file=out)


def print_complete(data, out):
    title = data["module"] if not data["family"] else f"{data['module']} restricted to {data['family']}"
    print(RULE, file=out)
    print(f"COMPLETION OF {title} AT I({data['group']})", file=out)
    print(RULE, file=out)
    print(f"  rank {data['rank']}, tower depth {data['depth']}", file=out)
    for lev in data["levels"]:
        print(f"  M/I^{lev['n']}M = {describe(lev['free'], {}, lev['torsion'])}", file=out)
    print(file=out)
    print(f"  tower oracle : {_descriptor_text(data['oracle'])}", file=out)
    print(f"  closed form  : {_descriptor_text(data['closed_form'])}", file=out)
    for piece in data["shadow"]:
        prime = "" if piece["prime"] is None else f" p={piece['prime']}"
        print(f"    {piece['piece']:10s}{prime} rank {piece['rank']:3d} -> {piece['completion']}", file=out)
    print(f"  {'agree' if data['agree'] else 'DISAGREE'}", file=out)


def _summand_text(s):
    p = s["prime"]
    completion = "" if p is None else ("  p=0 (uncompleted)" if p == 0 else f"  completed at {p}")
    ab = "x".join(f"C{d}" for d in s["weyl"]["abelianization"]) or "1"
    H = s["H"]
    lines = [
        f"  [{H['class']}] {H['label']:24s} |H|={H['order']:<4d} |W|={s['weyl']['order']:<4d} W^ab={ab}{completion}",
        "      phi: " + ", ".join(f"{h}->{k}" for h, k in s["phi"]),
    ]
    for row in s["weyl"].get("table", []):
        lines.append("      " + " ".join(f"{x:3d}" for x in row))
    return "\n".join(lines)


def print_decomposition(data, out):
    print(RULE, file=out)
    prime = f" at p={data['prime']}" if "prime" in data else ""
    print(f"DECOMPOSITION ({data['kind']}): {data['source']} -> {data['target']}{prime}", file=out)
    print(RULE, file=out)
    for term in data.get("leading", []):
        print(f"  leading: {term}", file=out)
    for s in data["summands"]:
        print(_summand_text(s), file=out)
    if data["pi0"] is not None:
        print(f"\n  pi_0 = {_descriptor_text(data['pi0'])}", file=out)
    if "note" in data:
        print(f"  note: {data['note']}", file=out)


def print_crosscheck(data, out):
    print(RULE, file=out)
    print(f"CROSSCHECK: {data['source']} -> {data['target']} (depth {data['depth']})", file=out)
    print(RULE, file=out)
    print(f"  decomposition : {_descriptor_text(data['decomposition'])}", file=out)
    print(f"  closed form   : {_descriptor_text(data['closed_form'])}", file=out)
    print(f"  tower oracle  : {_descriptor_text(data['tower'])}", file=out)
    print(f"  status: {data['status']}", file=out)
