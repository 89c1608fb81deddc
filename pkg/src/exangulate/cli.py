"""Declarative verification runner.

Spec files are TOML: a backend, a structure on it, caps, and a suite
selection.  Reports are deterministic for a fixed spec and seed; the
structured format is TOML with checks sorted by identifier.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .algebra import FinAbGroup, cyclic
from .bifunctor import HomBifunctor
from .category import (
    FinAbBackend,
    TableBackend,
    TableValidationError,
    capped_objects,
    table_from_groups,
)
from .exangle import ExStructure, ext1_structure, split_structure, verify_axioms
from .extcat import verify_exact_category
from .functors import (
    ExFunctor,
    NotRespectingError,
    duplication_exfunctor,
    extfun_from,
    gamma_from,
    identity_exfunctor,
    identity_gamma,
    relabel_functor,
    swap_admits_no_respecting_functor,
    swap_extcat_functor,
    verify_additive,
    verify_extcat_functor_laws,
    verify_natural,
    zero_exfunctor,
)
from .reporting import Report
from .twocat import (
    bracket,
    cell_from_balanced,
    cells_equal,
    check_adjoint_pair,
    check_interchange,
    ext_nt_is_natural,
    identity_adjunction,
    identity_cell,
    involution_adjunction,
    is_balanced,
    is_equivalence,
    scalar_cell,
    unbalanced_fixture,
    verify_updave_laws,
)
from .functors import is_exangulated, respects_exangles_over, respects_morphisms_over

SUITES = (
    "exact-category",
    "realisation-axioms",
    "functor-correspondence",
    "cell-correspondence",
    "two-functor",
    "adjunctions",
    "fixtures",
)


class SpecError(ValueError):
    pass


@dataclass
class SpecDocument:
    label: str
    backend: object
    structure: Optional[ExStructure]
    bifunctor_kind: str
    suites: tuple[str, ...]
    cap_objects: int
    cap_order: int
    samples: int
    functor_names: tuple[str, ...]
    scalar_cells: tuple[int, ...]
    adjunctions: tuple[str, ...]
    relabel_map: Optional[dict]
    grid_count: int


def hom_structure(backend) -> ExStructure:
    """The Hom bifunctor carries no realisation: extension category only."""
    return ExStructure("hom", backend, HomBifunctor(backend), None)


def _build_table_backend(cfg: dict) -> TableBackend:
    """A table backend, either tabulated from named groups or given raw.

    Raw form: [backend.homs] with "X,Y" keys holding invariant factor
    lists, [backend.identities] with coordinate lists, and
    [backend.compose] with "X,Y,Z" keys holding generator tables.
    """
    from .category import TableData

    objects = cfg.get("objects")
    raw_homs = cfg.get("homs")
    if raw_homs is None:
        if not isinstance(objects, dict) or not objects:
            raise SpecError("table backend needs [backend.objects]")
        named = {}
        for name, factors in objects.items():
            try:
                named[name] = FinAbGroup(tuple(factors))
            except (TypeError, ValueError) as exc:
                raise SpecError(f"bad invariant factors for {name}: {exc}") from None
        try:
            return TableBackend(table_from_groups(named))
        except TableValidationError as exc:
            raise SpecError(f"table fails validation: {exc}") from None
    names = tuple(cfg.get("names", ()))
    if not names:
        raise SpecError("raw tables need a top-level names list in [backend]")
    try:
        homs = {}
        for key, factors in raw_homs.items():
            x, y = (part.strip() for part in key.split(","))
            homs[(x, y)] = FinAbGroup(tuple(factors))
        identities = {
            name: tuple(coords) for name, coords in cfg.get("identities", {}).items()
        }
        compose = {}
        for key, table in cfg.get("compose", {}).items():
            x, y, z = (part.strip() for part in key.split(","))
            compose[(x, y, z)] = tuple(
                tuple(tuple(entry) for entry in row) for row in table
            )
        data = TableData(names, homs, identities, compose)
        return TableBackend(data)
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, TableValidationError):
            raise SpecError(f"table fails validation: {exc}") from None
        raise SpecError(f"bad raw table data: {exc}") from None


def load_spec(path: Path) -> SpecDocument:
    try:
        data = tomllib.loads(path.read_text())
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise SpecError(f"cannot parse spec: {exc}") from None
    return build_spec(data)


def build_spec(data: dict) -> SpecDocument:
    label = data.get("label", "unnamed")
    backend_cfg = data.get("backend")
    if not isinstance(backend_cfg, dict):
        raise SpecError("missing [backend] table")
    kind = backend_cfg.get("kind")
    if kind == "finab":
        exponent = backend_cfg.get("exponent")
        if not isinstance(exponent, int) or exponent < 2:
            raise SpecError("finab backend needs an integer exponent >= 2")
        backend = FinAbBackend(exponent)
    elif kind == "table":
        backend = _build_table_backend(backend_cfg)
    else:
        raise SpecError(f"unknown backend kind {kind!r}")

    st_cfg = data.get("structure", {})
    st_kind = st_cfg.get("kind", "split")
    degree = st_cfg.get("degree", 1)
    if not isinstance(degree, int) or degree < 1:
        raise SpecError("structure degree must be a positive integer")
    if st_kind == "split":
        structure = split_structure(backend, degree)
    elif st_kind == "ext1":
        if not isinstance(backend, FinAbBackend):
            raise SpecError("ext1 requires the finab backend")
        if degree != 1:
            raise SpecError("ext1 is a degree-1 structure")
        structure = ext1_structure(backend)
    elif st_kind == "hom":
        if degree != 1:
            raise SpecError("the hom bifunctor uses degree-1 conventions")
        structure = hom_structure(backend)
    else:
        raise SpecError(f"unknown structure kind {st_kind!r}")

    relative_tests = st_cfg.get("relative_tests")
    if relative_tests is not None:
        from .bifunctor import relative_subfunctor

        try:
            if isinstance(backend, FinAbBackend):
                tests = [FinAbGroup(tuple(f)) for f in relative_tests]
            else:
                tests = [tuple(sorted(t)) for t in relative_tests]
        except (TypeError, ValueError) as exc:
            raise SpecError(f"bad relative test objects: {exc}") from None
        structure = ExStructure(
            f"{structure.label}-relative",
            backend,
            relative_subfunctor(structure.bifunctor, tests),
            None,  # the relative substructure registers no realisation here
        )
        st_kind = f"{st_kind}-relative"

    caps = data.get("caps", {})
    suites = tuple(data.get("suites", list(SUITES)))
    for s in suites:
        if s not in SUITES:
            raise SpecError(f"unknown suite {s!r}")
    functors_cfg = data.get("functors", {})
    functor_names = tuple(
        functors_cfg.get("include", ["identity", "duplication", "zero"])
    )
    for name in functor_names:
        if name not in ("identity", "duplication", "zero"):
            raise SpecError(f"unknown functor fixture {name!r}")
    cells_cfg = data.get("cells", {})
    scalars = tuple(cells_cfg.get("scalars", [0, 1, 2, 3]))
    adj_cfg = data.get("adjunctions", {})
    adjunctions = tuple(adj_cfg.get("include", ["identity"]))
    relabel_map = adj_cfg.get("relabel")
    for name in adjunctions:
        if name not in ("identity", "relabel"):
            raise SpecError(f"unknown adjunction fixture {name!r}")
    if "relabel" in adjunctions:
        if not isinstance(backend, TableBackend):
            raise SpecError("relabel adjunction needs a table backend")
        if not isinstance(relabel_map, dict):
            raise SpecError("relabel adjunction needs [adjunctions.relabel]")
    grid_count = data.get("two_functor", {}).get("grids", 100)
    return SpecDocument(
        label=label,
        backend=backend,
        structure=structure,
        bifunctor_kind=st_kind,
        suites=suites,
        cap_objects=int(caps.get("objects", 2)),
        cap_order=int(caps.get("order", 16)),
        samples=int(caps.get("samples", 2)),
        functor_names=functor_names,
        scalar_cells=scalars,
        adjunctions=adjunctions,
        relabel_map=relabel_map,
        grid_count=int(grid_count),
    )


def _functor_fixtures(spec: SpecDocument) -> list[ExFunctor]:
    builders = {
        "identity": identity_exfunctor,
        "duplication": duplication_exfunctor,
        "zero": zero_exfunctor,
    }
    return [builders[name](spec.structure) for name in spec.functor_names]


# ---------------------------------------------------------------------------
# suites


def run_exact_category(spec: SpecDocument, seed: int, report: Report) -> None:
    verify_exact_category(
        spec.structure.bifunctor,
        cap_objects=spec.cap_objects,
        cap_order=spec.cap_order,
        samples=spec.samples,
        seed=seed,
        report=report,
    )


def run_realisation_axioms(spec: SpecDocument, seed: int, report: Report) -> None:
    if spec.structure.realisation is None:
        report.skip(
            "exangle/no-realisation",
            f"the {spec.bifunctor_kind} bifunctor carries no realisation",
        )
        return
    verify_axioms(
        spec.structure,
        cap_objects=spec.cap_objects,
        cap_order=spec.cap_order,
        samples=spec.samples,
        seed=seed,
        report=report,
    )


def run_functor_correspondence(spec: SpecDocument, seed: int, report: Report) -> None:
    st = spec.structure
    for exf in _functor_fixtures(spec):
        verify_additive(exf.functor, report=report)
        verify_natural(exf.gamma, cap_objects=spec.cap_objects, report=report)
        if st.realisation is not None:
            witness = is_exangulated(
                exf, spec.cap_objects, spec.cap_order, spec.samples, seed
            )
            report.record(
                f"functors/{exf.label}/is-exangulated",
                witness is None,
                witness="" if witness is None else str(witness),
            )
        efun = extfun_from(exf)
        verify_extcat_functor_laws(
            efun, cap_objects=spec.cap_objects, cap_order=spec.cap_order,
            seed=seed, report=report,
        )
        witness = respects_morphisms_over(
            efun, exf.functor, spec.cap_objects, spec.cap_order, spec.samples, seed
        )
        report.record(
            f"functors/{exf.label}/respects-morphisms",
            witness is None,
            witness="" if witness is None else str(witness),
        )
        if st.realisation is not None:
            witness = respects_exangles_over(
                efun, exf.functor, st, st, spec.cap_objects, spec.cap_order, seed
            )
            report.record(
                f"functors/{exf.label}/respects-exangles",
                witness is None,
                witness="" if witness is None else str(witness),
            )
        # round trip: components recovered exactly, then the functor again
        try:
            gamma2 = gamma_from(
                exf.functor, efun, st.bifunctor, st.bifunctor,
                cap_objects=spec.cap_objects,
            )
        except NotRespectingError as exc:
            report.record(
                f"functors/{exf.label}/round-trip", False, witness=str(exc)
            )
            continue
        ok = all(
            gamma2.component(*key) == hom
            for key, hom in exf.gamma.probe_components.items()
        )
        exf2 = ExFunctor(st, st, exf.functor, gamma2, label=f"{exf.label}/rt")
        efun2 = extfun_from(exf2)
        objs = capped_objects(st.backend, spec.cap_objects)
        from .bifunctor import Extension

        for a in objs:
            for c in objs:
                group = st.bifunctor.value(c, a)
                elems = (
                    list(group.elements(spec.cap_order))
                    if group.order <= spec.cap_order
                    else [group.zero(), *group.generators()]
                )
                for e in elems:
                    d = Extension(a, c, e, st.bifunctor)
                    if efun.object_map(d) != efun2.object_map(d):
                        ok = False
        report.record(f"functors/{exf.label}/round-trip", ok)


def run_cell_correspondence(spec: SpecDocument, seed: int, report: Report) -> None:
    st = spec.structure
    ident = identity_exfunctor(st)
    cells = [scalar_cell(ident, m) for m in spec.scalar_cells]
    cells.append(identity_cell(ident))
    ok, witness = True, ""
    for cell in cells:
        br = bracket(cell)
        if ext_nt_is_natural(
            br, st.bifunctor, spec.cap_objects, spec.cap_order, spec.samples, seed
        ) is not None:
            ok, witness = False, f"bracket of {cell.label} is not natural"
        if is_balanced(br, st.bifunctor, spec.cap_objects) is not None:
            ok, witness = False, f"bracket of {cell.label} is not balanced"
        back = cell_from_balanced(br, ident, ident, spec.cap_objects)
        if not cells_equal(back, cell, spec.cap_objects):
            ok, witness = False, f"round trip of {cell.label} differs"
    report.record("twocat/cell-correspondence-round-trip", ok, witness=witness)

    aleph = unbalanced_fixture(st) if spec.bifunctor_kind == "split" else None
    if aleph is None:
        split_st = split_structure(st.backend, 1)
        aleph = unbalanced_fixture(split_st)
        bf = split_st.bifunctor
    else:
        bf = st.bifunctor
    natural = ext_nt_is_natural(
        aleph, bf, spec.cap_objects, spec.cap_order, spec.samples, seed
    )
    report.record(
        "twocat/one-sided-identity-is-natural",
        natural is None,
        witness="" if natural is None else str(natural),
    )
    witness_obj = is_balanced(aleph, bf, spec.cap_objects)
    report.record(
        "twocat/one-sided-identity-not-balanced",
        witness_obj is not None,
        detail="a natural transformation of extension functors that is not balanced",
    )


def run_two_functor(spec: SpecDocument, seed: int, report: Report) -> None:
    st = spec.structure
    ident = identity_exfunctor(st)
    cells = [scalar_cell(ident, m) for m in spec.scalar_cells]
    verify_updave_laws(
        cells, cap_objects=spec.cap_objects, cap_order=spec.cap_order,
        seed=seed, report=report,
    )
    from .functors import duplication_exfunctor as dup_builder

    dup = dup_builder(st)
    rng = random.Random(seed)
    ok, witness = True, ""
    count = 0
    for _ in range(spec.grid_count):
        m, k, p, q = (rng.randrange(6) for _ in range(4))
        if not check_interchange(
            scalar_cell(dup, q), scalar_cell(ident, k),
            scalar_cell(dup, p), scalar_cell(ident, m),
        ):
            ok, witness = False, f"grid ({m}, {k}, {p}, {q})"
        count += 1
    report.record(
        "twocat/interchange-sampled-grids", ok,
        detail=f"{count} grids checked", witness=witness,
    )


def run_adjunctions(spec: SpecDocument, seed: int, report: Report) -> None:
    st = spec.structure
    for name in spec.adjunctions:
        if name == "identity":
            cand = identity_adjunction(st)
            exf = cand.left
        else:
            swap = relabel_functor(st.backend, spec.relabel_map)
            gamma = identity_gamma(st.bifunctor, swap)
            exf = ExFunctor(st, st, swap, gamma, label="relabel")
            cand = involution_adjunction(st, exf, label="relabel-adjunction")
        check_adjoint_pair(
            cand, cap_objects=spec.cap_objects, cap_order=spec.cap_order,
            seed=seed, report=report,
        )
        witness = is_equivalence(exf, spec.cap_objects)
        report.record(
            f"twocat/{cand.label}/is-equivalence-up-to-cap",
            witness is None,
            witness="" if witness is None else str(witness),
        )


def run_fixtures(spec: SpecDocument, seed: int, report: Report) -> None:
    """Counterexamples asserted as negatives, so passing means refuting."""
    backend = spec.backend
    split_st = (
        spec.structure
        if spec.bifunctor_kind == "split"
        else split_structure(backend, 1)
    )
    efun = swap_extcat_functor(split_st)
    rep_laws = verify_extcat_functor_laws(
        efun, cap_objects=spec.cap_objects, cap_order=spec.cap_order, seed=seed
    )
    report.record(
        "fixtures/swap-functor-is-exact",
        rep_laws.ok,
        witness="" if rep_laws.ok else str(rep_laws.failures[0]),
    )
    try:
        witness = swap_admits_no_respecting_functor(split_st, spec.cap_objects)
        report.record(
            "fixtures/swap-admits-no-respecting-functor", True, detail=witness.detail
        )
    except (AssertionError, ValueError) as exc:
        report.record(
            "fixtures/swap-admits-no-respecting-functor", False, witness=str(exc)
        )
    candidates = _functor_fixtures(spec)
    ok, witness = True, ""
    for exf in candidates:
        try:
            gamma_from(
                exf.functor, efun, split_st.bifunctor, split_st.bifunctor,
                cap_objects=spec.cap_objects,
            )
            ok, witness = False, f"{exf.label} unexpectedly respects the swap"
        except NotRespectingError:
            pass
    report.record("fixtures/swap-rejects-every-candidate-functor", ok, witness=witness)

    # a deliberately corrupted table is caught by validation
    from .category import validate_table

    data = table_from_groups({"P": cyclic(2), "Q": cyclic(4)})
    bad_compose = dict(data.compose)
    bad_compose[("P", "P", "P")] = (((0,),),)
    bad = type(data)(data.objects, data.homs, data.identities, bad_compose)
    problems = validate_table(bad)
    report.record(
        "fixtures/corrupted-table-detected",
        bool(problems),
        detail=problems[0] if problems else "",
    )

    # a corrupted realisation is caught by the axiom verifier
    if spec.bifunctor_kind == "ext1":
        from .exangle import Ext1Realisation, identity_padded_complex

        class _Corrupt(Ext1Realisation):
            def realise_complex(self, delta):
                if not delta.is_zero() and delta.A == cyclic(2) and delta.C == cyclic(2):
                    return identity_padded_complex(backend, delta.A, delta.C, 1)
                return super().realise_complex(delta)

        bad_structure = ExStructure(
            "corrupt", backend, spec.structure.bifunctor,
            _Corrupt(spec.structure.bifunctor),
        )
        bad_rep = verify_axioms(bad_structure, cap_objects=1, seed=seed)
        report.record(
            "fixtures/corrupted-realisation-detected",
            not bad_rep.ok,
            detail="; ".join(c.check_id for c in bad_rep.failures),
        )


SUITE_RUNNERS = {
    "exact-category": run_exact_category,
    "realisation-axioms": run_realisation_axioms,
    "functor-correspondence": run_functor_correspondence,
    "cell-correspondence": run_cell_correspondence,
    "two-functor": run_two_functor,
    "adjunctions": run_adjunctions,
    "fixtures": run_fixtures,
}


def run_spec(spec: SpecDocument, seed: int = 0, timings: Optional[dict] = None) -> Report:
    report = Report()
    report.caps.update(
        {
            "cap_objects": spec.cap_objects,
            "cap_order": spec.cap_order,
            "samples": spec.samples,
        }
    )
    for suite in spec.suites:
        t0 = time.monotonic()
        SUITE_RUNNERS[suite](spec, seed, report)
        if timings is not None:
            timings[suite] = time.monotonic() - t0
    return report


# ---------------------------------------------------------------------------
# describe


def planned_check_counts(spec: SpecDocument) -> dict:
    """Exact number of report entries each selected suite will emit."""
    backend = spec.backend
    objects = capped_objects(backend, spec.cap_objects)
    bf = spec.structure.bifunctor
    sampled = any(
        bf.value(c, a).order > spec.cap_order for a in objects for c in objects
    )
    has_realisation = spec.structure.realisation is not None
    per_functor = 13 + (2 if has_realisation else 0)
    counts = {
        "exact-category": 10 + (1 if sampled else 0),
        "realisation-axioms": (7 + (1 if sampled else 0)) if has_realisation else 1,
        "functor-correspondence": per_functor * len(spec.functor_names),
        "cell-correspondence": 3,
        "two-functor": 5,
        "adjunctions": 7 * len(spec.adjunctions),
        "fixtures": 4 + (1 if spec.bifunctor_kind == "ext1" else 0),
    }
    return {suite: counts[suite] for suite in spec.suites}


def describe_spec(spec: SpecDocument) -> list[str]:
    backend = spec.backend
    objects = capped_objects(backend, spec.cap_objects)
    lines = [
        f"spec {spec.label}",
        f"backend {backend!r}",
        f"structure {spec.bifunctor_kind} (degree {spec.structure.degree})",
        f"capped universe: {len(objects)} objects",
    ]
    bf = spec.structure.bifunctor
    total = 0
    sampled_pairs = 0
    for a in objects:
        for c in objects:
            group = bf.value(c, a)
            if group.order <= spec.cap_order:
                total += group.order
            else:
                sampled_pairs += 1
                total += 1 + group.rank + spec.samples
    lines.append(
        f"extension universe: {total} classes enumerated"
        + (f" ({sampled_pairs} pairs sampled)" if sampled_pairs else "")
    )
    from .algebra import DEFAULT_ENUMERATION_BOUND

    if spec.cap_order > DEFAULT_ENUMERATION_BOUND:
        oversize = sum(
            1
            for a in objects
            for c in objects
            if DEFAULT_ENUMERATION_BOUND < bf.value(c, a).order <= spec.cap_order
        )
        if oversize:
            lines.append(
                f"warning: {oversize} pairs would exceed the enumeration bound "
                f"({DEFAULT_ENUMERATION_BOUND}); runs will raise BoundExceeded"
            )
    for suite, count in planned_check_counts(spec).items():
        lines.append(f"suite {suite}: {count} planned checks")
    return lines


# ---------------------------------------------------------------------------
# report output


def render_text(spec_label: str, seed: int, report: Report, timings: dict) -> str:
    lines = [f"exangulate {__version__} | spec {spec_label} | seed {seed}"]
    for check in report.sorted_checks():
        line = f"[{check.status:>18}] {check.check_id}"
        if check.detail:
            line += f"  ({check.detail})"
        if check.witness:
            line += f"  witness: {check.witness}"
        lines.append(line)
    for suite in sorted(timings):
        lines.append(f"timing {suite}: {timings[suite]:.2f}s")
    lines.append(report.summary())
    return "\n".join(lines)


def _toml_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def render_structured(spec_label: str, seed: int, report: Report) -> str:
    lines = [
        f'tool = "exangulate {__version__}"',
        f'spec = "{_toml_escape(spec_label)}"',
        f"seed = {seed}",
        f'status = "{ "pass" if report.ok else "fail" }"',
        "",
        "[caps]",
    ]
    for key in sorted(report.caps):
        lines.append(f"{key} = {report.caps[key]}")
    for check in report.sorted_checks():
        lines.extend(
            [
                "",
                "[[check]]",
                f'id = "{_toml_escape(check.check_id)}"',
                f'status = "{check.status}"',
                f'detail = "{_toml_escape(check.detail)}"',
                f'witness = "{_toml_escape(check.witness)}"',
            ]
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="exangulate",
        description="verify extension-category and exangulation laws over finite instances",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_verify = sub.add_parser("verify", help="run the suites of a spec file")
    p_verify.add_argument("spec", type=Path)
    p_verify.add_argument("--suite", action="append", choices=SUITES, default=None)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--cap-objects", type=int, default=None)
    p_verify.add_argument("--cap-order", type=int, default=None)
    p_verify.add_argument("--report", type=Path, default=None)
    p_verify.add_argument("--format", choices=("text", "structured"), default="text")
    p_describe = sub.add_parser("describe", help="resolve a spec without running checks")
    p_describe.add_argument("spec", type=Path)
    args = parser.parse_args(argv)

    try:
        spec = load_spec(args.spec)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if "parse" in str(exc) else 3

    if args.command == "describe":
        for line in describe_spec(spec):
            print(line)
        return 0

    if args.suite:
        missing = [s for s in args.suite if s not in SUITES]
        if missing:
            print(f"error: unknown suites {missing}", file=sys.stderr)
            return 3
        spec.suites = tuple(args.suite)
    if args.cap_objects is not None:
        spec.cap_objects = args.cap_objects
    if args.cap_order is not None:
        spec.cap_order = args.cap_order

    timings: dict = {}
    report = run_spec(spec, seed=args.seed, timings=timings)
    if args.format == "structured":
        out = render_structured(spec.label, args.seed, report)
        print(out, end="")
    else:
        print(render_text(spec.label, args.seed, report, timings))
    if args.report is not None:
        args.report.write_text(render_structured(spec.label, args.seed, report))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
