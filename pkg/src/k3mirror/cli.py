"""Command-line front end.

Exit codes::

    0  success
    2  malformed input document
    3  odd lattice without --allow-odd
    4  no admissible vector within the search height
    5  Kähler class not norm-matched
    6  invariant violation
    7  duality check found distinct lattices
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from .exact import IntMatrix
from .lattice import LatticeError, OddLatticeError, discriminant_group, is_unimodular, signature
from .mirror import (
    DualityError,
    check_conditions,
    duality_check,
    is_k3_lattice,
    mirror_embedding,
    moduli_dimension,
    pair_to_ambient,
)
from .periods import InvariantError, NormMismatchError, mirror_map, mu_pipeline
from .serialize import (
    DocumentError,
    fmt_int,
    fmt_matrix,
    fmt_vector,
    int_matrix,
    lattice_from_doc,
    load_scenario_file,
    pair_to_doc,
    period_to_doc,
)
from .sublattice import DEFAULT_HEIGHT, Embedding, find_admissible_pair, orthogonal_complement

EXIT_OK = 0
EXIT_MALFORMED = 2
EXIT_ODD = 3
EXIT_NO_ADMISSIBLE = 4
EXIT_NORM = 5
EXIT_INVARIANT = 6
EXIT_DISTINCT = 7


class CommandFailed(Exception):
    def __init__(self, code: int, message: str, report: dict | None = None):
        super().__init__(message)
        self.code = code
        self.report = report


def default_height() -> int:
    env = os.environ.get("K3MIRROR_HEIGHT")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return DEFAULT_HEIGHT


def _load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise CommandFailed(EXIT_MALFORMED, f"{path}: malformed JSON: {exc}") from exc
    except OSError as exc:
        raise CommandFailed(EXIT_MALFORMED, f"{path}: {exc.strerror}") from exc


def _sig(lat) -> list[int]:
    s = signature(lat)
    return [s.positive, s.negative] if not s.zero else [s.positive, s.negative, s.zero]


def _lattice_block(e_or_lat) -> dict:
    if isinstance(e_or_lat, Embedding):
        lat = e_or_lat.lattice()
        return {"rank": lat.rank, "signature": _sig(lat), "gram": fmt_matrix(lat.gram),
                "basis": fmt_matrix(e_or_lat.basis)}
    return {"rank": e_or_lat.rank, "signature": _sig(e_or_lat), "gram": fmt_matrix(e_or_lat.gram)}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_lattice_info(doc, allow_odd: bool = False) -> dict:
    try:
        lat = lattice_from_doc(doc, allow_odd=allow_odd)
    except OddLatticeError as exc:
        raise CommandFailed(EXIT_ODD, f"{exc} (pass --allow-odd to accept it)") from exc
    det = lat.det
    return {
        "label": lat.label,
        "rank": lat.rank,
        "signature": _sig(lat),
        "det": fmt_int(det),
        "even": lat.is_even,
        "unimodular": is_unimodular(lat),
        "discriminant": [fmt_int(d) for d in discriminant_group(lat)] if det else None,
    }


def cmd_mirror(doc, height: int) -> dict:
    if not isinstance(doc, dict) or "ambient" not in doc or "M" not in doc:
        raise DocumentError('mirror needs a document with "ambient" and "M"')
    ambient = lattice_from_doc(doc["ambient"], allow_odd=bool(doc.get("allow_odd", False)))
    m_rows = doc["M"]["basis"] if isinstance(doc["M"], dict) else doc["M"]
    m_pol = Embedding(ambient, int_matrix(m_rows, ncols=ambient.rank), "M")
    t_lat = orthogonal_complement(m_pol, "T")
    found = find_admissible_pair(t_lat.lattice(), height)
    report: dict[str, Any] = {"M": _lattice_block(m_pol), "T": _lattice_block(t_lat), "height": height}
    if found is None:
        report["pair"] = None
        raise CommandFailed(EXIT_NO_ADMISSIBLE, f"no 1-admissible vector in T up to height {height}", report)
    pair = pair_to_ambient(found, t_lat)
    mcheck = mirror_embedding(m_pol, pair, t_lat)
    m_lat, c_lat = m_pol.lattice(), mcheck.lattice()
    report["pair"] = pair_to_doc(pair)
    report["Mcheck"] = _lattice_block(mcheck)
    if is_k3_lattice(ambient):
        report["rank_identity"] = {
            "rank_M": m_lat.rank,
            "rank_Mcheck": c_lat.rank,
            "sum": m_lat.rank + c_lat.rank,
            "holds": m_lat.rank + c_lat.rank == 20,
        }
        report["moduli_dimension"] = {"M": moduli_dimension(m_lat), "Mcheck": moduli_dimension(c_lat)}
    return report


def cmd_conditions(doc, height: int) -> dict:
    s, _ = load_scenario_file(doc)
    results = check_conditions(s, height)
    return {
        "conditions": [
            {"name": r.name, "passed": r.passed, "detail": r.detail,
             "witness": [[fmt_int(a) for a in w] if isinstance(w, list) else fmt_int(w) for w in r.witness]}
            for r in results
        ],
        "all_pass": all(r.passed for r in results),
    }


def cmd_mu(doc) -> dict:
    s, extras = load_scenario_file(doc)
    if s.p_prime is None:
        raise DocumentError('mu needs a scenario with "Pprime"')
    if "kahler" not in extras:
        raise DocumentError('mu needs a "kahler" vector (Kähler class of X in M⊗Q)')
    period = extras.get("period")
    if period is None:
        if "complexified_kahler" not in extras:
            raise DocumentError('mu needs "period" or "complexified_kahler"')
        period = mirror_map(extras["complexified_kahler"], s.p_prime)
    try:
        r = mu_pipeline(s, period, extras["kahler"])
    except NormMismatchError as exc:
        raise CommandFailed(EXIT_NORM, str(exc)) from exc
    except InvariantError as exc:
        raise CommandFailed(EXIT_INVARIANT, f"invariant violation: {exc}") from exc
    pic = r.picard.lattice()
    return {
        "period": period_to_doc(r.normalized_period),
        "B": fmt_vector(r.kahler_class.b),
        "omega_check": fmt_vector(r.kahler_class.w),
        "B_residue": fmt_vector(r.residue.residues),
        "B_integral": r.b_integral,
        "zeroed_period": period_to_doc(r.zeroed_period),
        "triple": _triple_doc(r.triple),
        "rotated_triple": _triple_doc(r.rotated),
        "new_kahler": fmt_vector(r.rotated.kahler),
        "new_holomorphic": period_to_doc(r.new_period),
        "picard": {"rank": pic.rank, "signature": _sig(pic), "gram": fmt_matrix(pic.gram),
                   "basis": fmt_matrix(r.picard.basis)},
        "contains_Mcheck": r.contains_mcheck,
        "missing": [[fmt_int(a) for a in v] for v in r.missing],
        "omega_check_in_P": r.omega_in_p,
        "plane_meets_P_dim": r.plane_meets_p,
    }


def _triple_doc(t) -> dict:
    return {"kahler": fmt_vector(t.kahler), "re": fmt_vector(t.re_holo), "im": fmt_vector(t.im_holo)}


def cmd_duality(doc, height: int) -> dict:
    s, _ = load_scenario_file(doc)
    try:
        res = duality_check(s, height)
    except DualityError as exc:
        raise CommandFailed(EXIT_NO_ADMISSIBLE, str(exc)) from exc
    rep = res.report
    out = {
        "verdict": rep.verdict,
        "invariants": _fmt_invariants(rep.invariants_compared),
        "certificate": fmt_matrix(rep.certificate) if isinstance(rep.certificate, IntMatrix) else None,
        "notes": rep.notes,
        "pair": pair_to_doc(res.pair),
        "Mcheckcheck": _lattice_block(res.double_mirror),
    }
    if rep.verdict == "distinct":
        raise CommandFailed(EXIT_DISTINCT, "M̌̌ and M are distinct: " + "; ".join(rep.notes), out)
    return out


def _fmt_invariants(inv: dict) -> dict:
    out = {}
    for k, (a, b) in inv.items():
        if k == "discriminant":
            a = [fmt_int(d) for d in a] if a is not None else None
            b = [fmt_int(d) for d in b] if b is not None else None
        out[k] = [a, b]
    return out


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

def _sig_text(sig: list) -> str:
    return "(" + ",".join(str(a) for a in sig) + ")"


def render_text(command: str, report: dict) -> str:
    if command == "lattice-info":
        parts = [f"rank {report['rank']}", f"signature {_sig_text(report['signature'])}", f"det {report['det']}",
                 "even" if report["even"] else "odd"]
        if report["unimodular"]:
            parts.append("unimodular")
        elif report["discriminant"] is not None:
            parts.append("discriminant (" + ",".join(report["discriminant"]) + ")")
        else:
            parts.append("degenerate")
        return ", ".join(parts)
    lines = []
    if command == "mirror":
        lines.append(f"M: rank {report['M']['rank']}, signature {_sig_text(report['M']['signature'])}")
        lines.append(f"T: rank {report['T']['rank']}, signature {_sig_text(report['T']['signature'])}")
        if report.get("pair") is None:
            lines.append(f"no admissible pair up to height {report['height']}")
            return "\n".join(lines)
        lines.append(f"E  = ({', '.join(report['pair']['E'])})")
        lines.append(f"E' = ({', '.join(report['pair']['Eprime'])})")
        mc = report["Mcheck"]
        lines.append(f"Mcheck: rank {mc['rank']}, signature {_sig_text(mc['signature'])}")
        lines.extend("  " + " ".join(f"{a:>3}" for a in row) for row in mc["gram"])
        if "rank_identity" in report:
            ri = report["rank_identity"]
            lines.append(f"rank(M) + rank(Mcheck) = {ri['rank_M']} + {ri['rank_Mcheck']} = {ri['sum']}")
    elif command == "conditions":
        for c in report["conditions"]:
            lines.append(f"({c['name']}) {'pass' if c['passed'] else 'FAIL'}: {c['detail']}")
    elif command == "mu":
        lines.append(f"B = ({', '.join(report['B'])})")
        lines.append(f"B residue = ({', '.join(report['B_residue'])})" + ("  [integral]" if report["B_integral"] else ""))
        lines.append(f"omega_check = ({', '.join(report['omega_check'])})")
        lines.append(f"new Kähler class = ({', '.join(report['new_kahler'])})")
        nh = report["new_holomorphic"]
        lines.append(f"new holomorphic form = ({', '.join(nh['x'])}) + i({', '.join(nh['y'])})")
        pic = report["picard"]
        lines.append(f"Picard: rank {pic['rank']}, signature {_sig_text(pic['signature'])}")
        lines.extend("  " + " ".join(f"{a:>3}" for a in row) for row in pic["gram"])
        lines.append(f"contains Mcheck: {'yes' if report['contains_Mcheck'] else 'no'}")
        lines.append(f"omega_check in P: {'yes' if report['omega_check_in_P'] else 'no'}")
    elif command == "duality":
        lines.append(f"verdict: {report['verdict']}")
        for k, (a, b) in report["invariants"].items():
            lines.append(f"  {k}: {a} vs {b}")
        lines.extend(f"  note: {n}" for n in report["notes"])
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--text", action="store_true", help="human-readable output instead of JSON")
    common.add_argument("--output", metavar="PATH", help="write the report to PATH")

    searching = argparse.ArgumentParser(add_help=False)
    searching.add_argument("--height", type=int, default=None,
                           help="coordinate bound for vector searches (default: $K3MIRROR_HEIGHT or 10)")

    parser = argparse.ArgumentParser(prog="k3mirror", description="Lattice mirror symmetry for K3 surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("lattice-info", parents=[common], help="rank, signature, determinant, discriminant")
    p.add_argument("file")
    p.add_argument("--allow-odd", action="store_true")
    p = sub.add_parser("mirror", parents=[common, searching], help="find an admissible pair and the mirror lattice")
    p.add_argument("file")
    p = sub.add_parser("conditions", parents=[common, searching], help="check the scenario conditions i, ii, iii")
    p.add_argument("file")
    p = sub.add_parser("mu", parents=[common], help="zero the B-field and rotate")
    p.add_argument("file")
    p = sub.add_parser("duality", parents=[common, searching], help="compare the double mirror with M")
    p.add_argument("file")
    return parser


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Execute a command; return ``(exit_code, report_text, error_message)``."""
    args = build_parser().parse_args(argv)
    height = getattr(args, "height", None)
    if height is None:
        height = default_height()
    report: dict | None = None
    code, message = EXIT_OK, ""
    try:
        doc = _load_json(args.file)
        if args.command == "lattice-info":
            report = cmd_lattice_info(doc, args.allow_odd)
        elif args.command == "mirror":
            report = cmd_mirror(doc, height)
        elif args.command == "conditions":
            report = cmd_conditions(doc, height)
        elif args.command == "mu":
            report = cmd_mu(doc)
        else:
            report = cmd_duality(doc, height)
    except CommandFailed as exc:
        code, message, report = exc.code, str(exc), exc.report
    except OddLatticeError as exc:
        code, message = EXIT_ODD, str(exc)
    except InvariantError as exc:
        code, message = EXIT_INVARIANT, f"invariant violation: {exc}"
    except (DocumentError, LatticeError, KeyError, TypeError) as exc:
        code, message = EXIT_MALFORMED, f"invalid input: {exc}"

    text = ""
    if report is not None:
        text = render_text(args.command, report) if args.text else json.dumps(report, indent=2, ensure_ascii=False)
    return code, text, message


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, text, message = run(argv)
    output = build_parser().parse_args(argv).output
    if text:
        if output:
            with open(output, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            print(text)
    if message:
        print(f"error: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
