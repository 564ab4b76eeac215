"""Render run results as text, JSON, or CSV.

All three formats carry the same numbers; text rounds for the eye while
JSON/CSV keep full precision.  dBm values are display sugar only: the
simulator works in shot-noise units (SNU) and a fixed reference power maps
variances onto an absolute scale, chosen so the default electronic-noise
floor of 0.1 SNU displays as -86.9 dBm.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .engine import RunResult

SCHEMA_VERSION = "1"

ELECTRONIC_FLOOR_SNU = 0.1
ELECTRONIC_FLOOR_DBM = -86.9
# 10*log10(v_snu) + offset == dBm; pinned by the electronic floor above
DBM_OFFSET = ELECTRONIC_FLOOR_DBM - 10.0 * math.log10(ELECTRONIC_FLOOR_SNU)

STOKES = ("S0", "S1", "S2", "S3")


def to_db(variance_snu: float) -> float:
    return 10.0 * math.log10(variance_snu)


def snu_to_dbm(variance_snu: float) -> float:
    return 10.0 * math.log10(variance_snu) + DBM_OFFSET


def dbm_to_snu(dbm: float) -> float:
    return 10.0 ** ((dbm - DBM_OFFSET) / 10.0)


def _duan_verdict(nonseparable: bool) -> str:
    return "NON-SEPARABLE" if nonseparable else "not shown non-separable"


def _epr_verdict(entangled: bool) -> str:
    return "EPR" if entangled else "not EPR"


def _sign_char(sign: int) -> str:
    return "+" if sign > 0 else "-"


def result_to_dict(result: RunResult) -> dict:
    ports = {}
    s1_db = None
    for p in result.ports:
        norm = p.stats.normalized
        entry = {
            "shot_noise": float(p.stats.shot_noise),
            "means": {name: float(v) for name, v in zip(STOKES, p.stats.means)},
            "variances_snu": {name: float(v) for name, v in zip(STOKES, norm)},
            "variances_db": {name: to_db(v) for name, v in zip(STOKES, norm)},
            "variances_dbm": {name: snu_to_dbm(v) for name, v in zip(STOKES, norm)},
            "measured": [f"S{k}" for k in p.measured],
            "squeezed": {
                f"S{k}": {
                    "squeezed": rep.squeezed,
                    "variance_snu": rep.variance / p.stats.shot_noise,
                    "bound_snu": rep.bound / p.stats.shot_noise,
                    "partner": f"S{rep.partner}",
                    "conjugate": f"S{rep.conjugate}",
                    "conjugate_variance_snu": rep.conjugate_variance / p.stats.shot_noise,
                }
                for k, rep in p.squeezing.items()
            },
            "uncertainty_ok": all(u.satisfied for u in p.uncertainty),
        }
        ports[p.label] = entry
        if s1_db is None and 1 in p.measured:
            s1_db = entry["variances_db"]["S1"]

    combinations = []
    criteria = []
    for j in result.joints:
        for c in j.combos:
            combinations.append({
                "parameter": f"S{c.parameter}",
                "sign": _sign_char(c.sign),
                "ports": list(c.ports),
                "variance_snu": float(c.variance_snu),
            })
        rep = j.criteria.asdict()
        rep["pair"] = list(j.labels)
        rep["duan_verdict"] = _duan_verdict(j.criteria.duan_nonseparable)
        rep["epr_verdict"] = _epr_verdict(j.criteria.epr_entangled)
        criteria.append(rep)

    mc = None
    if result.mc is not None:
        mc = {
            "shots": result.mc_config.shots,
            "seed": result.mc_config.seed,
            "shards": result.mc_config.shards,
            "z_threshold": result.mc.z_threshold,
            "passed": result.mc.passed,
            "max_z": result.mc.max_z,
            "entries": [
                {
                    "key": e.key,
                    "analytic": e.analytic,
                    "estimate": e.estimate,
                    "standard_error": e.standard_error,
                    "z": e.z,
                    "passed": e.passed,
                }
                for e in result.mc.entries
            ],
        }

    out = {
        "schema_version": SCHEMA_VERSION,
        "scenario": result.scenario,
        "parameters": result.parameters,
        "metadata": result.metadata,
        "ports": ports,
        "combinations": combinations,
        "criteria": criteria,
        "montecarlo": mc,
    }
    if s1_db is not None:
        out["s1_db"] = s1_db
    return out


def render_json(result: RunResult) -> str:
    return json.dumps(result_to_dict(result), indent=2)


def render_text(result: RunResult) -> str:
    d = result_to_dict(result)
    lines = [f"scenario: {d['scenario']}"]
    if d["parameters"]:
        lines.append("parameters: " + " ".join(
            f"{k}={v:g}" for k, v in d["parameters"].items()
        ))
    for label, p in d["ports"].items():
        lines.append(f"port {label}: <S0> = {p['means']['S0']:.6g} photons")
        for name in STOKES:
            if name not in p["measured"]:
                continue
            lines.append(
                f"  V({name}) = {p['variances_snu'][name]:.6g} SNU "
                f"({p['variances_db'][name]:+.6g} dB, "
                f"{p['variances_dbm'][name]:.6g} dBm)"
            )
        hits = [name for name, rep in p["squeezed"].items() if rep["squeezed"]]
        if hits:
            for name in hits:
                rep = p["squeezed"][name]
                lines.append(
                    f"  polarization squeezed in {name}: "
                    f"V = {rep['variance_snu']:.6g} < |<{rep['partner']}>| = "
                    f"{rep['bound_snu']:.6g} < V({rep['conjugate']}) = "
                    f"{rep['conjugate_variance_snu']:.6g}  (SNU)"
                )
        else:
            lines.append("  no polarization squeezing")
    if d["combinations"]:
        lines.append("combinations:")
        for c in d["combinations"]:
            a, b = c["ports"]
            lines.append(
                f"  V({c['parameter']},{a} {c['sign']} {c['parameter']},{b}) = "
                f"{c['variance_snu']:.6g} SNU"
            )
    if d["criteria"]:
        lines.append("criteria:")
        for c in d["criteria"]:
            duan = c["duan_lhs_normalized"]
            rel = "<" if duan < c["duan_rhs_normalized"] else ">="
            lines.append(
                f"  duan: {duan:.6g} {rel} {c['duan_rhs_normalized']:g}"
                f"  ->  {c['duan_verdict']}"
            )
            epr = c["epr_product_normalized"]
            rel = "<" if epr < 1.0 else ">="
            lines.append(f"  epr: {epr:.6g} {rel} 1  ->  {c['epr_verdict']}")
    if d["montecarlo"] is not None:
        mc = d["montecarlo"]
        lines.append(
            f"montecarlo: {mc['shots']} shots, seed {mc['seed']}, "
            f"max |z| = {mc['max_z']:.3g} "
            f"({'PASS' if mc['passed'] else 'FAIL'} at z = {mc['z_threshold']:g})"
        )
    return "\n".join(lines) + "\n"


CSV_COLUMNS = (
    "section", "port", "parameter", "sign", "quantity",
    "value", "stderr", "shots", "seed",
)


def render_csv(result: RunResult) -> str:
    d = result_to_dict(result)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)

    def row(section, port="", parameter="", sign="", quantity="",
            value="", stderr="", shots="", seed=""):
        w.writerow([section, port, parameter, sign, quantity,
                    repr(value) if isinstance(value, float) else value,
                    stderr, shots, seed])

    for label, p in d["ports"].items():
        for name in STOKES:
            row("port", label, name, quantity="mean", value=float(p["means"][name]))
            row("port", label, name, quantity="variance_snu",
                value=float(p["variances_snu"][name]))
            row("port", label, name, quantity="variance_db",
                value=float(p["variances_db"][name]))
    for c in d["combinations"]:
        row("combination", ",".join(c["ports"]), c["parameter"], c["sign"],
            "variance_snu", float(c["variance_snu"]))
    for c in d["criteria"]:
        pair = ",".join(c["pair"])
        row("criterion", pair, "duan", quantity="value",
            value=float(c["duan_lhs_normalized"]))
        row("criterion", pair, "duan", quantity="threshold",
            value=float(c["duan_rhs_normalized"]))
        row("criterion", pair, "duan", quantity="satisfied",
            value=int(c["duan_nonseparable"]))
        row("criterion", pair, "epr", quantity="value",
            value=float(c["epr_product_normalized"]))
        row("criterion", pair, "epr", quantity="threshold", value=1.0)
        row("criterion", pair, "epr", quantity="satisfied",
            value=int(c["epr_entangled"]))
    if d["montecarlo"] is not None:
        mc = d["montecarlo"]
        for e in mc["entries"]:
            kind, rest = e["key"].split(":", 1)
            port, parameter = rest.rsplit(":", 1)
            row("montecarlo", port.replace(":", ","), parameter,
                quantity=f"{kind}_estimate", value=float(e["estimate"]),
                stderr=repr(float(e["standard_error"])),
                shots=mc["shots"], seed=mc["seed"])
    return buf.getvalue()


# sweep rendering: steps is a list of (value, RunResult)

def _sweep_quantities(result: RunResult) -> dict[str, float]:
    d = result_to_dict(result)
    out = {}
    for label, p in d["ports"].items():
        for name in p["measured"]:
            out[f"{label}_{name.lower()}_db"] = p["variances_db"][name]
    for c in d["combinations"]:
        word = "plus" if c["sign"] == "+" else "minus"
        out[f"v_{c['parameter'].lower()}_{word}"] = c["variance_snu"]
    for c in d["criteria"]:
        out["duan_lhs"] = c["duan_lhs_normalized"]
        out["epr"] = c["epr_product_normalized"]
    return out


def sweep_to_dict(parameter: str, steps) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "sweep": {
            "parameter": parameter,
            "steps": [
                {"value": float(v), "quantities": _sweep_quantities(r)}
                for v, r in steps
            ],
        },
    }


def render_sweep_json(parameter: str, steps) -> str:
    return json.dumps(sweep_to_dict(parameter, steps), indent=2)


def render_sweep_csv(parameter: str, steps) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["parameter", "value", "quantity", "result"])
    for value, result in steps:
        for name, q in _sweep_quantities(result).items():
            w.writerow([parameter, repr(float(value)), name, repr(float(q))])
    return buf.getvalue()


def render_sweep_text(parameter: str, steps) -> str:
    lines = [f"sweep {parameter}:"]
    for value, result in steps:
        qs = _sweep_quantities(result)
        rendered = " ".join(f"{k}={v:.6g}" for k, v in qs.items())
        lines.append(f"  {parameter} = {value:g}: {rendered}")
    return "\n".join(lines) + "\n"
