"""Command-line front end.

Four commands operate on JSON spec files (schema documented in the README
and enforced here):

* ``check``    validate a spec and print its certificate;
* ``compute``  print reduced Groebner generators and projective dimensions
               of the singular / Kupka / persistent ideals;
* ``verify``   run the structural checks and report pass/fail per check;
* ``batch``    verify a directory of specs, or N freshly generated random
               instances, optionally in parallel.

Exit codes: 0 success, 1 I/O or parse error, 2 validation failure,
3 failed check.  Machine-format reports are deterministic for a fixed spec
and seed up to the timing fields.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import __version__
from .foliation import (
    FoliationSpec,
    SpecValidationError,
    build_form,
    validate_spec,
)
from .groebner import GREVLEX, normal_form, projective_dimension
from .poly import PolyParseError, parse_poly, poly_to_str
from .sampling import instance_menu, random_foliation_spec
from .schemes import (
    CheckResult,
    scheme_ideals,
    verify_decomposition,
    verify_identities,
    verify_lemma,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_CHECKS = 3

ALL_CHECKS = ("identities", "sing", "kupka", "persistent", "lemma", "decomposition")
WORKERS_ENV = "LOGFOL_WORKERS"


class SpecFileError(Exception):
    """Unreadable, unparsable or schema-violating spec file."""


# ---------------------------------------------------------------------------
# spec files
# ---------------------------------------------------------------------------

def _rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SpecFileError(f"{where}: expected an integer or 'a/b' string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecFileError(f"{where}: {exc}") from None


def _subset_key(key: str, q: int, s: int) -> tuple:
    try:
        parts = tuple(int(p) for p in key.split(","))
    except ValueError:
        raise SpecFileError(f"lambdas key {key!r} is not a comma-separated index list") from None
    if len(parts) != q:
        raise SpecFileError(f"lambdas key {key!r} must list exactly q={q} indices")
    if list(parts) != sorted(set(parts)):
        raise SpecFileError(f"lambdas key {key!r} must be strictly increasing")
    if parts[0] < 1 or parts[-1] > s:
        raise SpecFileError(f"lambdas key {key!r} out of range 1..{s}")
    return tuple(p - 1 for p in parts)


class SpecDocument:
    """A parsed spec file: the foliation data plus run options."""

    def __init__(self, name, spec, level, checks, variables):
        self.name = name
        self.spec = spec
        self.level = level
        self.checks = checks
        self.variables = variables

    def echo(self) -> dict:
        spec = self.spec
        out = {
            "n": spec.n,
            "q": spec.q,
            "divisors": [poly_to_str(f) for f in spec.divisors],
            "validation_level": self.level,
            "checks": list(self.checks),
        }
        if self.variables:
            out["variables"] = list(self.variables)
        if spec.residue_matrix is not None:
            out["residue_matrix"] = [[str(c) for c in row] for row in spec.residue_matrix]
        else:
            out["lambdas"] = {
                ",".join(str(i + 1) for i in subset): str(value)
                for subset, value in sorted(spec.lambdas.items())
            }
        return out


def parse_spec_document(data: dict, name: str) -> SpecDocument:
    if not isinstance(data, dict):
        raise SpecFileError("spec file must contain a JSON object")
    for field in ("n", "q", "divisors"):
        if field not in data:
            raise SpecFileError(f"missing required field {field!r}")
    n, q = data["n"], data["q"]
    if not isinstance(n, int) or not isinstance(q, int):
        raise SpecFileError("'n' and 'q' must be integers")
    divisor_strings = data["divisors"]
    if not isinstance(divisor_strings, list) or not divisor_strings:
        raise SpecFileError("'divisors' must be a non-empty list of polynomial strings")
    variables = data.get("variables")
    if variables is not None:
        if (not isinstance(variables, list)
                or len(variables) != n + 1
                or len(set(variables)) != n + 1):
            raise SpecFileError(f"'variables' must list {n + 1} distinct names")
    divisors = []
    for i, text in enumerate(divisor_strings):
        if not isinstance(text, str):
            raise SpecFileError(f"divisor {i + 1} must be a polynomial string")
        try:
            divisors.append(parse_poly(text, n + 1, names=variables))
        except PolyParseError as exc:
            raise SpecFileError(f"divisor {i + 1}: {exc}") from None
    s = len(divisors)

    has_matrix = "residue_matrix" in data
    has_lambdas = "lambdas" in data
    if has_matrix == has_lambdas:
        raise SpecFileError("exactly one of 'residue_matrix' and 'lambdas' must be present")
    matrix = None
    lambdas = None
    if has_matrix:
        raw = data["residue_matrix"]
        if not isinstance(raw, list):
            raise SpecFileError("'residue_matrix' must be a list of rows")
        matrix = [[_rational(entry, f"residue_matrix[{k + 1}]") for entry in row]
                  for k, row in enumerate(raw)]
    else:
        raw = data["lambdas"]
        if not isinstance(raw, dict):
            raise SpecFileError("'lambdas' must be an object keyed by subsets like '1,3'")
        lambdas = {_subset_key(key, q, s): _rational(value, f"lambdas[{key}]")
                   for key, value in raw.items()}

    level = data.get("validation_level", "generic")
    if level not in ("basic", "generic", "full-snc"):
        raise SpecFileError(f"unknown validation_level {level!r}")
    checks = data.get("checks", list(ALL_CHECKS))
    if not isinstance(checks, list) or any(c not in ALL_CHECKS for c in checks):
        raise SpecFileError(f"'checks' entries must come from {ALL_CHECKS}")

    try:
        spec = FoliationSpec(n, q, divisors, residue_matrix=matrix, lambdas=lambdas)
    except (ValueError, TypeError) as exc:
        raise SpecFileError(str(exc)) from None
    return SpecDocument(name, spec, level, tuple(checks), variables)


def load_spec_file(path: str) -> SpecDocument:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise SpecFileError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise SpecFileError(f"{path} is not valid JSON: {exc}") from None
    return parse_spec_document(data, os.path.basename(path))


def spec_to_json(doc: SpecDocument) -> dict:
    """Serializable spec document (the inverse of parse_spec_document)."""
    return doc.echo()


# ---------------------------------------------------------------------------
# running commands on a document
# ---------------------------------------------------------------------------

def _validation_block(doc: SpecDocument, waive: bool):
    """Validate the document; returns (vs_or_None, block_dict, exit_code)."""
    try:
        vs = validate_spec(doc.spec, doc.level)
        return vs, {"status": "pass", "level": doc.level,
                    "certificate": list(vs.certificate)}, EXIT_OK
    except SpecValidationError as err:
        failures = [str(f) for f in err.failures]
        if not waive:
            return None, {"status": "fail", "level": doc.level,
                          "failures": failures}, EXIT_VALIDATION
        try:
            vs = validate_spec(doc.spec, "basic")
        except SpecValidationError as basic_err:
            return None, {"status": "fail", "level": "basic",
                          "failures": [str(f) for f in basic_err.failures]}, EXIT_VALIDATION
        return vs, {"status": "waived", "level": doc.level,
                    "waived_failures": failures,
                    "certificate": list(vs.certificate)}, EXIT_OK


def _ideal_block(ideal) -> dict:
    return {
        "generators": [str(g) for g in ideal.groebner_basis(GREVLEX).elements],
        "projective_dimension": projective_dimension(ideal),
    }


def run_check(doc: SpecDocument) -> tuple:
    vs, block, code = _validation_block(doc, waive=False)
    report = _report_skeleton(doc, "check")
    report["validation"] = block
    report["verdict"] = "pass" if code == EXIT_OK else "validation-failed"
    return report, code


def run_compute(doc: SpecDocument, which: str) -> tuple:
    vs, block, code = _validation_block(doc, waive=False)
    report = _report_skeleton(doc, "compute")
    report["validation"] = block
    if code != EXIT_OK:
        report["verdict"] = "validation-failed"
        return report, code
    form = build_form(vs)
    ideals = scheme_ideals(vs, form)
    wanted = ALL_CHECKS if which == "all" else (which,)
    out = {}
    if "sing" in wanted or which == "all":
        out["singular"] = _ideal_block(ideals.singular)
    if "kupka" in wanted or which == "all":
        out["kupka"] = _ideal_block(ideals.kupka)
    if "persistent" in wanted or which == "all":
        out["persistent_sum"] = _ideal_block(ideals.persistent_sum)
        out["persistent_cap"] = _ideal_block(ideals.persistent_cap)
        out["persistent_equal"] = (
            ideals.persistent_sum.groebner_basis(GREVLEX).elements
            == ideals.persistent_cap.groebner_basis(GREVLEX).elements)
    report["ideals"] = out
    report["verdict"] = "pass"
    return report, EXIT_OK


def _sanity_check_sing(ideals) -> CheckResult:
    t0 = time.perf_counter()
    return CheckResult("sing", "pass", _ideal_block(ideals.singular),
                       time.perf_counter() - t0)


def _sanity_check_kupka(ideals) -> CheckResult:
    t0 = time.perf_counter()
    gb = ideals.kupka.groebner_basis(GREVLEX)
    contained = all(normal_form(g, gb).is_zero for g in ideals.singular.generators)
    details = _ideal_block(ideals.kupka)
    details["contains_singular_ideal"] = contained
    return CheckResult("kupka", "pass" if contained else "fail", details,
                       time.perf_counter() - t0)


def _sanity_check_persistent(ideals) -> CheckResult:
    t0 = time.perf_counter()
    gb = ideals.persistent_cap.groebner_basis(GREVLEX)
    included = all(normal_form(g, gb).is_zero
                   for g in ideals.persistent_sum.generators)
    details = {
        "sum": _ideal_block(ideals.persistent_sum),
        "cap": _ideal_block(ideals.persistent_cap),
        "sum_included_in_cap": included,
        "ideals_equal": (ideals.persistent_sum.groebner_basis(GREVLEX).elements
                         == gb.elements),
    }
    return CheckResult("persistent", "pass" if included else "fail", details,
                       time.perf_counter() - t0)


def run_verify(doc: SpecDocument, waive: bool = False) -> tuple:
    vs, block, code = _validation_block(doc, waive)
    report = _report_skeleton(doc, "verify")
    report["validation"] = block
    if code != EXIT_OK:
        report["verdict"] = "validation-failed"
        return report, code
    form = build_form(vs)
    needs_ideals = any(c in doc.checks for c in ("sing", "kupka", "persistent", "decomposition"))
    ideals = scheme_ideals(vs, form) if needs_ideals else None
    results = []
    for check in ALL_CHECKS:
        if check not in doc.checks:
            continue
        if check == "identities":
            results.append(verify_identities(vs, form))
        elif check == "sing":
            results.append(_sanity_check_sing(ideals))
        elif check == "kupka":
            results.append(_sanity_check_kupka(ideals))
        elif check == "persistent":
            results.append(_sanity_check_persistent(ideals))
        elif check == "lemma":
            results.append(verify_lemma(vs, waive_preconditions=waive))
        elif check == "decomposition":
            results.extend(verify_decomposition(vs, ideals, form).checks)
    report["checks"] = [r.to_dict() for r in results]
    failed = [r.name for r in results if r.status == "fail"]
    report["verdict"] = "pass" if not failed else "fail"
    if failed:
        report["failed_checks"] = failed
    return report, EXIT_OK if not failed else EXIT_CHECKS


def _report_skeleton(doc: SpecDocument, command: str) -> dict:
    return {
        "engine": {"name": "logfol", "version": __version__},
        "command": command,
        "spec": doc.echo(),
        "name": doc.name,
    }


# ---------------------------------------------------------------------------
# batch mode
# ---------------------------------------------------------------------------

def _batch_worker(item) -> dict:
    label, spec_json, waive = item
    try:
        doc = parse_spec_document(spec_json, label)
        report, code = run_verify(doc, waive)
    except SpecFileError as exc:
        report = {"name": label, "verdict": "error", "error": str(exc)}
        code = EXIT_IO
    report["exit_code"] = code
    return report


def generate_batch_specs(count: int, seed: int, level: str) -> list:
    """Deterministic batch of random instance documents for a seed."""
    from .sampling import random_validated_spec

    rng = random.Random(seed)
    menu = instance_menu()
    items = []
    for i in range(count):
        n, q, s = menu[rng.randrange(len(menu))]
        vs = random_validated_spec(rng, n, q, s, level=level)
        spec = vs.spec
        doc = SpecDocument(f"random-{i:04d}", spec, level, ALL_CHECKS, None)
        items.append((doc.name, spec_to_json(doc)))
    return items


def run_batch(target: str, seed: int, workers: int, level: str | None,
              waive: bool, output_dir: str | None) -> tuple:
    if target.isdigit():
        effective_level = level or "full-snc"
        items = [(name, data, waive)
                 for name, data in generate_batch_specs(int(target), seed, effective_level)]
    else:
        if not os.path.isdir(target):
            raise SpecFileError(f"{target} is neither a directory nor an instance count")
        paths = sorted(p for p in os.listdir(target) if p.endswith(".json"))
        if not paths:
            raise SpecFileError(f"no .json spec files in {target}")
        items = []
        for p in paths:
            with open(os.path.join(target, p), "r", encoding="utf-8") as handle:
                try:
                    data = json.load(handle)
                except json.JSONDecodeError as exc:
                    raise SpecFileError(f"{p} is not valid JSON: {exc}") from None
            if level:
                data["validation_level"] = level
            items.append((p, data, waive))

    if workers > 1 and len(items) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_batch_worker, items))
    else:
        reports = [_batch_worker(item) for item in items]

    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
        for report in reports:
            stem = report["name"]
            if stem.endswith(".json"):
                stem = stem[:-5]
            path = os.path.join(output_dir, f"{stem}.report.json")
            _atomic_write(path, _machine_text(report))

    summary = {
        "engine": {"name": "logfol", "version": __version__},
        "command": "batch",
        "seed": seed,
        "count": len(reports),
        "results": [{"name": r["name"], "verdict": r.get("verdict", "error"),
                     "exit_code": r["exit_code"]} for r in reports],
        "reports": reports,
    }
    worst = max((r["exit_code"] for r in reports), default=EXIT_OK)
    summary["verdict"] = "pass" if worst == EXIT_OK else "fail"
    return summary, worst


def _atomic_write(path: str, text: str):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as handle:
        handle.write(text)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _machine_text(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _human_lines(report: dict) -> list:
    lines = [f"logfol {report.get('command', '?')}: {report.get('name', '')}".rstrip()]
    validation = report.get("validation")
    if validation:
        lines.append(f"validation [{validation['level']}]: {validation['status']}")
        for entry in validation.get("certificate", []):
            lines.append(f"  · {entry}")
        for entry in validation.get("failures", []) + validation.get("waived_failures", []):
            prefix = "waived" if validation["status"] == "waived" else "failed"
            lines.append(f"  ! {prefix}: {entry}")
    for check in report.get("checks", []):
        status = check["status"].upper()
        lines.append(f"check {check['name']}: {status} ({check['seconds'] * 1000:.1f} ms)")
        for key, value in sorted(check["details"].items()):
            if isinstance(value, list):
                value = ", ".join(str(v) for v in value) or "(none)"
            lines.append(f"    {key}: {value}")
    ideals = report.get("ideals")
    if ideals:
        for name, block in sorted(ideals.items()):
            if isinstance(block, dict):
                gens = ", ".join(block["generators"]) or "(zero ideal)"
                lines.append(f"{name}: dim {block['projective_dimension']}  [{gens}]")
            else:
                lines.append(f"{name}: {block}")
    results = report.get("results")
    if results is not None:
        lines.append(f"batch of {report['count']} (seed {report.get('seed')})")
        for row in results:
            lines.append(f"  {row['name']}: {row['verdict']}")
    if "verdict" in report:
        lines.append(f"verdict: {report['verdict'].upper()}")
    return lines


def emit(report: dict, fmt: str, output: str | None) -> None:
    if fmt == "machine":
        text = _machine_text(report)
    else:
        text = "\n".join(_human_lines(report)) + "\n"
    if output:
        _atomic_write(output, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(parser):
    parser.add_argument("--format", choices=("human", "machine"), default="human")
    parser.add_argument("--output", metavar="PATH", default=None)
    parser.add_argument("--level", choices=("basic", "generic", "full-snc"), default=None,
                        help="override the validation level declared in the spec file")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logfol",
        description="Singular, Kupka and persistent-singularity ideals of "
                    "logarithmic foliations on projective space.")
    parser.add_argument("--version", action="version", version=f"logfol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="validate a spec file")
    p_check.add_argument("spec")
    _add_common(p_check)

    p_compute = sub.add_parser("compute", help="compute scheme ideals")
    p_compute.add_argument("spec")
    p_compute.add_argument("--which", choices=("sing", "kupka", "persistent", "all"),
                           default="all")
    _add_common(p_compute)

    p_verify = sub.add_parser("verify", help="run the structural checks")
    p_verify.add_argument("spec")
    p_verify.add_argument("--waive-preconditions", action="store_true")
    _add_common(p_verify)

    p_batch = sub.add_parser("batch", help="verify a directory of specs or N random instances")
    p_batch.add_argument("target", help="directory of .json specs, or an instance count")
    p_batch.add_argument("--seed", type=int, default=0)
    p_batch.add_argument("--workers", type=int, default=None)
    p_batch.add_argument("--waive-preconditions", action="store_true")
    _add_common(p_batch)
    return parser


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        if args.command == "batch":
            workers = args.workers
            if workers is None:
                workers = int(os.environ.get(WORKERS_ENV, "1"))
            report, code = run_batch(args.target, args.seed, workers,
                                     args.level, args.waive_preconditions,
                                     args.output)
            emit(report, args.format, None)
            return code
        doc = load_spec_file(args.spec)
        if args.level:
            doc.level = args.level
        if args.command == "check":
            report, code = run_check(doc)
        elif args.command == "compute":
            report, code = run_compute(doc, args.which)
        else:
            report, code = run_verify(doc, args.waive_preconditions)
        emit(report, args.format, args.output)
        return code
    except SpecFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
