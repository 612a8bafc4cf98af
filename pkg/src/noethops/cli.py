"""Command-line front end: batch construction, membership, norms, bases.

Every run is a pure function of its input file and flags; repeated runs are
byte-identical.  Exit codes: 0 ok, 1 negative verdict, 2 verification
failure, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources

from .cm import monomial_basis, reconstruction_certified
from .ideals import CertificationFailure, IdealSpec, cofactor_member
from .member import ideal_member, norm_eval, sqrt_str
from .noether import (
    ResidueDatum,
    VerificationFailure,
    double_hypersurface_member,
    generators_from_residue_data,
    generators_from_tilts,
)
from .polys import DenominatorVanishes, Poly, PolyParseError, parse_poly, poly_to_str

USAGE_ERROR = 64
VERIFY_ERROR = 2
NEGATIVE = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


class SpecError(ValueError):
    pass


def load_problem(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read problem spec {path}: {exc}")
    validate_problem(raw)
    return raw


def validate_problem(raw: dict) -> None:
    """Schema check before any computation; raises SpecError."""
    if not isinstance(raw, dict):
        raise SpecError("problem spec must be a JSON object")
    for key in ("dims", "ideal", "M", "ch_data"):
        if key not in raw:
            raise SpecError(f"problem spec missing key {key!r}")
    dims = raw["dims"]
    if (not isinstance(dims, list) or len(dims) != 2
            or not all(isinstance(d, int) and d >= 0 for d in dims)):
        raise SpecError("dims must be [n, p] with nonnegative integers")
    n, p = dims
    if not isinstance(raw["ideal"], list) or not raw["ideal"]:
        raise SpecError("ideal must be a nonempty list of polynomial strings")
    if (not isinstance(raw["M"], list) or len(raw["M"]) != p
            or not all(isinstance(e, int) and e >= 0 for e in raw["M"])):
        raise SpecError("M must list one nonnegative integer per w variable")
    if not isinstance(raw["ch_data"], list) or not raw["ch_data"]:
        raise SpecError("ch_data must be a nonempty list")
    for entry in raw["ch_data"]:
        if not isinstance(entry, dict) or "a" not in entry or "M" not in entry:
            raise SpecError('each ch_data entry needs "a" and "M"')
        if (not isinstance(entry["M"], list) or len(entry["M"]) != p
                or not all(isinstance(e, int) and e >= 0 for e in entry["M"])):
            raise SpecError("ch_data M must list one nonnegative integer per w variable")
    if "points" in raw and raw["points"] is not None:
        for pt in raw["points"]:
            if not isinstance(pt, list) or len(pt) != n:
                raise SpecError("each sample point needs one value per z variable")


def build_ideal(raw: dict) -> IdealSpec:
    n, p = raw["dims"]
    gens = tuple(parse_poly(s, n, p) for s in raw["ideal"])
    return IdealSpec(gens=gens, dims=(n, p), M=tuple(raw["M"]),
                     asserted=bool(raw.get("asserted", False)),
                     label=str(raw.get("label", "")))


def build_data(raw: dict) -> list:
    n, p = raw["dims"]
    return [ResidueDatum(parse_poly(entry["a"], n, p), tuple(entry["M"]))
            for entry in raw["ch_data"]]


def parse_point(text, n) -> tuple:
    vals = [Fraction(v) if isinstance(v, str) else Fraction(v) for v in text]
    if len(vals) != n:
        raise SpecError("point arity does not match dims")
    return tuple(vals)


def parse_points_arg(arg: str, n: int) -> list:
    pts = []
    for chunk in arg.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        pts.append(parse_point([v.strip() for v in chunk.split(",")], n))
    if not pts:
        raise SpecError("no sample points given")
    return pts


def spec_points(raw: dict) -> list:
    n = raw["dims"][0]
    return [parse_point(pt, n) for pt in raw.get("points") or []]


def _emit(payload: dict, as_json: bool, lines) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------------------
# subcommands

def cmd_gens(args) -> int:
    raw = load_problem(args.spec)
    ideal = build_ideal(raw)
    data = build_data(raw)
    count = args.tilts if args.tilts else raw.get("tilts")
    try:
        if args.method == "tilts":
            gens = generators_from_tilts(data, ideal, count=count)
        else:
            gens = generators_from_residue_data(data, ideal)
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return VERIFY_ERROR
    lines = [f"ideal {ideal}", f"method {gens.label}", f"operators {len(gens.ops)}"]
    lines += gens.describe()
    payload = {
        "ideal": [poly_to_str(g) for g in ideal.gens],
        "method": gens.label,
        "operators": [
            {"provenance": prov.describe(), "op": str(op)}
            for op, prov in zip(gens.ops, gens.provenance)
        ],
    }
    _emit(payload, args.json, lines)
    return 0


def cmd_member(args) -> int:
    raw = load_problem(args.spec)
    ideal = build_ideal(raw)
    data = build_data(raw)
    n, p = ideal.dims
    phi = parse_poly(args.phi, n, p)
    gens = generators_from_residue_data(data, ideal)
    verdict = ideal_member(phi, gens)
    bound = args.cofactor_bound
    if bound is None:
        bound = max(0, int(phi.degree()) + 2) if not phi.is_zero() else 0
    oracle = cofactor_member(phi, ideal, bound)
    if verdict.member and not oracle:
        oracle = cofactor_member(phi, ideal, bound + 2)
        bound += 2
        if not oracle:
            print("verification failure: duality-positive but no cofactors "
                  f"found at degree {bound}", file=sys.stderr)
            return VERIFY_ERROR
    lines = [f"phi {poly_to_str(phi)}",
             f"member {'yes' if verdict.member else 'no'}"]
    if verdict.member:
        lines.append(f"cofactors found at degree {bound}")
    else:
        lines.append(
            f"witness operator {verdict.witness_index} value {verdict.witness_value}")
        lines.append(
            f"cofactors at degree {bound}: "
            + ("found (inconsistent!)" if oracle else "not found (consistent)"))
    payload = {
        "phi": poly_to_str(phi),
        "member": verdict.member,
        "witness_index": verdict.witness_index,
        "witness_value": verdict.witness_value,
        "cofactor_bound": bound,
        "cofactors_found": oracle,
    }
    _emit(payload, args.json, lines)
    return 0 if verdict.member else NEGATIVE


def cmd_norm(args) -> int:
    raw = load_problem(args.spec)
    ideal = build_ideal(raw)
    data = build_data(raw)
    n, p = ideal.dims
    phi = parse_poly(args.phi, n, p)
    gens = generators_from_residue_data(data, ideal)
    pts = parse_points_arg(args.points, n) if args.points else spec_points(raw)
    if not pts:
        raise SpecError("no sample points: pass --points or put them in the spec")
    lines, rows = [], []
    for pt in pts:
        try:
            nv = norm_eval(phi, gens, pt)
        except DenominatorVanishes as exc:
            print(f"verification failure: {exc}", file=sys.stderr)
            return VERIFY_ERROR
        pt_s = ",".join(str(x) for x in pt)
        lines.append(f"{pt_s}; {poly_to_str(phi)}; {nv.squared}; "
                     f"{sqrt_str(nv.squared, args.digits)}")
        rows.append({"point": pt_s, "squared": str(nv.squared),
                     "root": sqrt_str(nv.squared, args.digits)})
    _emit({"phi": poly_to_str(phi), "rows": rows}, args.json, lines)
    return 0


def cmd_basis(args) -> int:
    raw = load_problem(args.spec)
    ideal = build_ideal(raw)
    basis = monomial_basis(ideal)
    n, p = ideal.dims
    mons = [poly_to_str(Poly.monomial((0,) * n, mon)) if any(mon) else "1"
            for mon in basis.monomials]
    ok = True
    for mon in basis.reduction:
        ok = ok and reconstruction_certified(Poly.monomial((0,) * n, mon), basis)
    lines = [f"ideal {ideal}",
             f"basis {' '.join(mons)}",
             f"denominator_locus {poly_to_str(basis.denominator_locus)}",
             f"tie_break {basis.tie_break}"]
    lines += [f"reduce {line}" for line in basis.describe()]
    lines.append(f"reconstruction_certified {'yes' if ok else 'no'}")
    payload = {
        "basis": mons,
        "denominator_locus": poly_to_str(basis.denominator_locus),
        "reduction": basis.describe(),
        "reconstruction_certified": ok,
        "tie_break": basis.tie_break,
    }
    _emit(payload, args.json, lines)
    return 0 if ok else VERIFY_ERROR


def cmd_kollekt(args) -> int:
    if args.spec:
        try:
            with open(args.spec, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read {args.spec}: {exc}")
        if raw.get("kind") != "double_hypersurface":
            raise SpecError('expected a spec with "kind": "double_hypersurface"')
        ambient = int(raw["ambient"])
        f = parse_poly(raw["f"], ambient, 0)
        cases = [(parse_poly(c["phi"], ambient, 0), None) for c in raw.get("cases", [])]
        if args.phi:
            cases.append((parse_poly(args.phi, ambient, 0), None))
    else:
        if not args.f or not args.phi:
            raise SpecError("kollekt needs --spec or both --f and --phi")
        ambient = args.ambient
        f = parse_poly(args.f, ambient, 0)
        cases = [(parse_poly(args.phi, ambient, 0), None)]
    lines = [f"f {poly_to_str(f)}"]
    rows = []
    all_member = True
    for phi, _ in cases:
        member, witness = double_hypersurface_member(f, phi)
        all_member = all_member and member
        if member:
            w = ""
        else:
            opname = "identity" if witness[0] == 0 else f"d/dz{witness[0]}"
            w = f" witness {opname} -> {poly_to_str(witness[1])}"
        lines.append(f"phi {poly_to_str(phi)}: "
                     f"{'member' if member else 'non-member'}{w}")
        rows.append({"phi": poly_to_str(phi), "member": member})
    _emit({"f": poly_to_str(f), "cases": rows}, args.json, lines)
    return 0 if all_member else NEGATIVE


def fixture_names() -> list:
    root = resources.files("noethops") / "fixtures"
    return sorted(entry.name for entry in root.iterdir() if entry.name.endswith(".json"))


def fixture_path(name: str) -> str:
    return str(resources.files("noethops") / "fixtures" / name)


def cmd_selftest(args) -> int:
    failures = 0
    for name in fixture_names():
        path = fixture_path(name)
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        try:
            if raw.get("kind") == "double_hypersurface":
                ambient = int(raw["ambient"])
                f = parse_poly(raw["f"], ambient, 0)
                for case in raw["cases"]:
                    phi = parse_poly(case["phi"], ambient, 0)
                    member, _ = double_hypersurface_member(f, phi)
                    if member != bool(case["member"]):
                        raise VerificationFailure(
                            f"{name}: {case['phi']} expected member={case['member']}")
            else:
                validate_problem(raw)
                ideal = build_ideal(raw)
                data = build_data(raw)
                gens = generators_from_residue_data(data, ideal)
                basis = monomial_basis(ideal)
                for case in raw.get("cases", []):
                    phi = parse_poly(case["phi"], *ideal.dims)
                    verdict = ideal_member(phi, gens)
                    if verdict.member != bool(case["member"]):
                        raise VerificationFailure(
                            f"{name}: {case['phi']} expected member={case['member']}")
                    D = max(0, int(phi.degree()) + 2) if not phi.is_zero() else 0
                    if verdict.member and not cofactor_member(phi, ideal, D + 2):
                        raise VerificationFailure(
                            f"{name}: {case['phi']} member without cofactors")
                for mon in basis.reduction:
                    n, _ = ideal.dims
                    if not reconstruction_certified(Poly.monomial((0,) * n, mon), basis):
                        raise VerificationFailure(f"{name}: reconstruction failed")
            print(f"ok {name}")
        except (VerificationFailure, CertificationFailure, SpecError,
                PolyParseError) as exc:
            failures += 1
            print(f"FAIL {name}: {exc}")
    return 0 if failures == 0 else VERIFY_ERROR


# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    ap = _Parser(prog="noethops",
                 description="Noetherian operator modules, membership by "
                             "duality, and exact pointwise norms")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gens", help="construct and verify a generating set")
    g.add_argument("--spec", required=True)
    g.add_argument("--method", choices=("residue", "tilts"), default="residue")
    g.add_argument("--tilts", type=int, default=None,
                   help="tilt points per direction (tilts method)")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_gens)

    m = sub.add_parser("member", help="ideal membership by duality")
    m.add_argument("--spec", required=True)
    m.add_argument("--phi", required=True)
    m.add_argument("--cofactor-bound", type=int, default=None, dest="cofactor_bound")
    m.add_argument("--json", action="store_true")
    m.set_defaults(func=cmd_member)

    nrm = sub.add_parser("norm", help="exact squared pointwise norm")
    nrm.add_argument("--spec", required=True)
    nrm.add_argument("--phi", required=True)
    nrm.add_argument("--points", default=None,
                     help='semicolon-separated points, e.g. "2;3" or "1,0;2,1"')
    nrm.add_argument("--digits", type=int, default=12,
                     help="decimal digits for the display square root")
    nrm.add_argument("--json", action="store_true")
    nrm.set_defaults(func=cmd_norm)

    b = sub.add_parser("basis", help="monomial basis of the truncated quotient")
    b.add_argument("--spec", required=True)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_basis)

    k = sub.add_parser("kollekt",
                       help="membership test for the square of a hypersurface ideal")
    k.add_argument("--spec", default=None)
    k.add_argument("--f", default=None)
    k.add_argument("--phi", default=None)
    k.add_argument("--ambient", type=int, default=2)
    k.add_argument("--json", action="store_true")
    k.set_defaults(func=cmd_kollekt)

    s = sub.add_parser("selftest", help="run the bundled golden fixtures")
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except (SpecError, PolyParseError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (VerificationFailure, CertificationFailure) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return VERIFY_ERROR


if __name__ == "__main__":
    sys.exit(main())
