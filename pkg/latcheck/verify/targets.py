"""
Verification targets.

Table targets expand into one job per (row, parameter) and are run by
``RowVerifier``; structural targets check the fixed objects of the catalog
(involution matrices, glue models, embeddings, quotient images).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from latcheck.catalog.involutions import (
    coinvariant_lattice,
    induced_involution,
    invariant_lattice,
    is_involution,
    preserves_form,
)
from latcheck.catalog.loader import Catalog
from latcheck.catalog.partial_gram import completion_genus, solve_catalog_system
from latcheck.catalog.pushforward import degree_holds, load_pushforward, pushforward
from latcheck.constants import DEFAULT_D_MAX, DEFAULT_PARAM_MAX, MIXED_K_MAX, ORBIFOLD_PARAM_MAX
from latcheck.errors import BudgetExceededError, LatcheckError, LatticeError, UnknownTargetError
from latcheck.genus.genus import same_genus
from latcheck.genus.rows import RowVerifier, parameter_values, row_values
from latcheck.genus.star import alternative_gluing, check_star_condition, summand_embedding
from latcheck.lattice.core import EmbeddedSublattice, Lattice, bilinear, direct_sum, divisibility, orthogonal_complement
from latcheck.lattice.shortvec import short_vectors
from latcheck.linalg.exact import determinant, identity, int_matrix, matmul, solve_rational, to_rows
from latcheck.models import RowReport
from latcheck.torsion.isometry import Outcome, fqm_isomorphic, fqm_orbits
from latcheck.torsion.module import discriminant_module, elements_with, milgram_signature

logger = logging.getLogger(__name__)

TABLE_TARGETS = (
    "z4-families",
    "klein-families",
    "z4-orbifolds",
    "klein-orbifolds",
    "mixed-d6",
    "mixed-d4",
)

# Squares of the candidate wall classes in the D6(2) image.
WALL_BOUND = 12
ORBIT_SQUARE = Fraction(3, 2)


@dataclass(frozen=True)
class RunOptions:
    param_max: int = DEFAULT_PARAM_MAX
    d_max: int = DEFAULT_D_MAX
    budget: int | None = None


def _report(target: str, row: str, label: str = "", param: int | None = None, **columns: str) -> RowReport:
    return RowReport(target=target, row=row, param=param, label=label, columns=dict(columns))


def _guard(report: RowReport, name: str, check: Callable[[], tuple[Outcome, str]], **kwargs) -> None:
    """Run ``check`` and record its outcome; library errors become FAIL."""
    try:
        outcome, detail = check()
    except BudgetExceededError as exc:
        logger.warning("%s/%s %s: %s", report.target, report.row, name, exc)
        outcome, detail = Outcome.UNKNOWN, str(exc)
    except LatcheckError as exc:
        outcome, detail = Outcome.FAIL, str(exc)
    report.add(name, outcome, detail, **kwargs)


# -- tables ------------------------------------------------------------


def table_jobs(catalog: Catalog, key: str, options: RunOptions) -> list[tuple[str, int]]:
    """``(row id, parameter)`` pairs in row order, parameters ascending."""
    table = catalog.table(key)
    limit = options.param_max
    if table.kind == "mixed":
        limit = min(limit, MIXED_K_MAX)
    elif table.kind == "orbifolds":
        limit = min(limit, ORBIFOLD_PARAM_MAX)
    jobs = []
    for row in sorted(table.rows, key=lambda r: r.id):
        values = parameter_values(row, limit, options.d_max)
        if table.kind == "orbifolds":
            values = values[:limit]
        jobs.extend((row.id, value) for value in values)
    return jobs


def run_table_jobs(catalog: Catalog, key: str, jobs: list[tuple[str, int]], budget: int | None) -> list[RowReport]:
    verifier = RowVerifier(catalog, key, budget)
    rows = {r.id: r for r in verifier.table.rows}
    return [verifier.verify(rows[row_id], value) for row_id, value in jobs]


def flag_ambiguous_pairings(catalog: Catalog, key: str, reports: list[RowReport], budget: int | None = None) -> None:
    """Flag rows sharing a parameter value whose printed T genera coincide."""
    table = catalog.table(key)
    if table.kind != "mixed":
        return
    rows = {r.id: r for r in table.rows}
    by_value: dict[int | None, list[RowReport]] = {}
    for report in reports:
        by_value.setdefault(report.param, []).append(report)
    for value, group in by_value.items():
        genera = {}
        for report in group:
            row = rows[report.row]
            try:
                candidates = catalog.recipe(row.t, row_values(row, value or 0), scope=table)
            except LatcheckError:
                continue
            if candidates:
                genera[report.row] = candidates[0].genus
        ids = sorted(genera)
        for i, a in enumerate(ids):
            for b in ids[i + 1 :]:
                if same_genus(genera[a], genera[b], budget) is Outcome.PASS:
                    for report in group:
                        if report.row in (a, b) and "ambiguous_pairing" not in report.flags:
                            report.flags.append("ambiguous_pairing")


def run_table(catalog: Catalog, key: str, options: RunOptions) -> list[RowReport]:
    reports = run_table_jobs(catalog, key, table_jobs(catalog, key, options), options.budget)
    flag_ambiguous_pairings(catalog, key, reports, options.budget)
    return reports


# -- discriminant orbits -----------------------------------------------


def check_orbits(catalog: Catalog, options: RunOptions) -> list[RowReport]:
    """
    Elements of order 2 and square 3/2 in ``A_Omega4 ⊕ A_<2d>`` exist exactly
    when ``d`` is not divisible by 4; for ``d = 1, 5`` the two classes
    ``x = g5 + g6 + d·γ`` and ``x + 2g1 + 2g2`` lie in different orbits.
    """
    base = catalog.genus("Omega4").disc
    reports = []
    for d in range(1, 4 * options.param_max + 1):
        module = base.direct_sum(discriminant_module(Lattice(int_matrix([[2 * d]]), label=f"<{2 * d}>")))
        report = _report("orbits", "order2-square3/2", "A_Omega4 + A_<2d>", param=d)
        try:
            found = elements_with(module, 2, ORBIT_SQUARE, options.budget)
        except BudgetExceededError as exc:
            report.add("existence", Outcome.UNKNOWN, str(exc), severity="warning")
            reports.append(report)
            continue
        report.columns["elements"] = str(len(found))
        report.add("existence", Outcome.of(bool(found) == (d % 4 != 0)), f"{len(found)} elements, d mod 4 = {d % 4}")
        if d in (1, 5):
            x = module.element([0, 0, 0, 0, 1, 1, d])
            y = module.element([2, 2, 0, 0, 1, 1, d])
            partition = fqm_orbits(module, [x, y], options.budget, split=False)
            if partition.unresolved:
                status = Outcome.UNKNOWN
            else:
                status = Outcome.of(partition.orbit_of(x) != partition.orbit_of(y))
            report.add(
                "orbit separation",
                status,
                f"q(x) = {module.q(x)}, q(y) = {module.q(y)}, {len(partition.orbits)} orbits",
                witness=f"x={x}, y={y}",
            )
        reports.append(report)
    return reports


# -- involutions -------------------------------------------------------


def _involution_report(catalog: Catalog, target: str, key: str, budget: int | None) -> RowReport:
    inv = induced_involution(catalog, key)
    record = inv.record
    report = _report(target, key, record.host, invariant=record.invariant, coinvariant=record.coinvariant)
    report.add("involution", Outcome.of(is_involution(inv.matrix)), "A^2 = I")
    report.add("isometry", Outcome.of(preserves_form(inv.matrix, inv.host.lattice.gram)), "A^T G A = G")
    fixed, moved = inv.invariant, inv.coinvariant
    report.add("invariant rank", Outcome.of(fixed.rank == record.invariant_rank), f"{fixed.rank}")
    report.add("ranks", Outcome.of(fixed.rank + moved.rank == inv.host.rank), f"{fixed.rank} + {moved.rank}")
    _guard(report, "invariant genus", lambda: (same_genus(fixed.lattice(), catalog.recipe_lattice(record.invariant), budget), record.invariant))
    _guard(
        report,
        "coinvariant genus",
        lambda: (same_genus(moved.lattice(), catalog.recipe_lattice(record.coinvariant), budget), record.coinvariant),
    )
    return report


def check_z4_involution(catalog: Catalog, options: RunOptions) -> list[RowReport]:
    return [_involution_report(catalog, "z4-involution", "z4-orbifold", options.budget)]


def check_klein_involutions(catalog: Catalog, options: RunOptions) -> list[RowReport]:
    keys = ("klein-orbifold-tau", "klein-orbifold-phi")
    reports = [_involution_report(catalog, "klein-involutions", key, options.budget) for key in keys]
    tau, phi = (induced_involution(catalog, key) for key in keys)
    z4 = induced_involution(catalog, "z4-orbifold")
    summary = _report("klein-involutions", "comparison", "tau vs phi")
    _guard(
        summary,
        "invariant genera agree",
        lambda: (same_genus(tau.invariant.lattice(), phi.invariant.lattice(), options.budget), "genus level"),
    )
    summary.add(
        "differs from the cyclic case",
        Outcome.of(tau.invariant.rank != z4.invariant.rank),
        f"invariant ranks {tau.invariant.rank} vs {z4.invariant.rank}",
    )
    reports.append(summary)
    return reports


# -- glue models -------------------------------------------------------


def check_glue(catalog: Catalog, options: RunOptions) -> list[RowReport]:
    target = catalog.lattice("LambdaN")
    reports = []
    for key in sorted(catalog.glue_models):
        model = catalog.glue_model(key)
        report = _report("glue", key, " + ".join(s.name for s in model.summands))
        orders = [model.spec.order_of(v) for v in model.spec.glue_vectors]
        report.add("glue orders", Outcome.of(all(n == 2 for n in orders)), f"orders {orders}")
        _guard(report, "overlattice genus", lambda: (same_genus(model.spec.overlattice(), target, options.budget), "LambdaN"))
        reports.append(report)
    return reports


# -- star condition ----------------------------------------------------


def _embedded_image(catalog: Catalog, key: str) -> EmbeddedSublattice:
    record = catalog.embeddings[key]
    host = catalog.host(record.host)
    rows = [host.integral_vector(text) for text in record.vectors.values()]
    return EmbeddedSublattice(host.lattice, int_matrix(rows, host.rank))


def _star_detail(star) -> str:
    steps = ", ".join(f"{name}={o.value}" for name, o in star.steps.items())
    return f"{star.detail}; {steps}" if steps else star.detail


def check_star(catalog: Catalog, options: RunOptions) -> list[RowReport]:
    budget = options.budget
    reports = []
    for key in sorted(catalog.embeddings):
        record = catalog.embeddings[key]
        report = _report("star", key, f"{record.source} in {record.host}")
        image = _embedded_image(catalog, key)
        source = catalog.recipe_lattice(record.source)
        report.add("gram", Outcome.of(to_rows(image.gram) == to_rows(source.gram)), record.source)
        report.add("primitive", Outcome.of(image.primitive), f"index {image.index_in_saturation()}")
        if record.reference:
            reference = catalog.glue_model(record.reference).spec

            def explicit():
                star = check_star_condition(image, reference, budget)
                return star.outcome, _star_detail(star)

            _guard(report, "star condition", explicit)
        reports.append(report)

    lambda_n = discriminant_module(catalog.lattice("LambdaN"))
    for key in sorted(catalog.glue_models):
        model = catalog.glue_model(key)
        report = _report("star", key, "reference gluing")

        def self_check():
            star = check_star_condition(summand_embedding(model.spec, 0), model.spec, budget)
            return star.outcome, _star_detail(star)

        _guard(report, "reference satisfies condition", self_check)
        factors = model.record.alternative_factors
        if factors:
            d, c = model.summands
            try:
                alternative = alternative_gluing(d, c, lambda_n, factors, budget)
            except BudgetExceededError as exc:
                logger.warning("alternative gluing for %s not exhausted: %s", key, exc)
                alternative = None
            if alternative is None:
                report.add("alternative gluing", Outcome.UNKNOWN, f"no gluing with factors {factors} found", severity="warning")
            else:
                star = check_star_condition(summand_embedding(alternative, 0), model.spec, budget)
                status = {Outcome.FAIL: Outcome.PASS, Outcome.PASS: Outcome.FAIL}.get(star.outcome, Outcome.UNKNOWN)
                report.add(
                    "alternative gluing",
                    status,
                    f"factors {factors}; condition {star.outcome.value} against the reference",
                    severity="warning",
                )
        reports.append(report)
    return reports


# -- walls -------------------------------------------------------------


def _walls(sub: EmbeddedSublattice, squares: list[int]) -> list[list[int]]:
    """Images of short vectors of ``sub`` with square in ``squares`` and divisibility 2."""
    found = []
    basis = sub.basis
    for v in short_vectors(sub.lattice(), WALL_BOUND):
        image = [int(x) for x in matmul(int_matrix([list(v)], sub.rank), basis).flat]
        if sub.ambient.square(image) in squares and divisibility(image, sub.ambient) == 2:
            found.append(image)
    return found


def _refined(walls: list[list[int]], exceptional: list[list[int]]) -> list[list[int]]:
    """Walls ``w`` with ``w/2`` in the lattice up to half a sum of exceptional classes."""
    if not walls:
        return []
    n = len(walls[0])
    residues = {
        tuple(sum(e * v[i] for e, v in zip(eps, exceptional)) % 2 for i in range(n))
        for eps in product((0, 1), repeat=len(exceptional))
    }
    return [w for w in walls if tuple(c % 2 for c in w) in residues]


def _model_vectors(model, names: list[str]) -> list[list[int]]:
    """Summand basis vectors of a glue model in overlattice coordinates."""
    over = model.spec.overlattice()
    width = over.rank
    rows = [[int(model.names.index(name) == j) for j in range(width)] for name in names]
    coords = solve_rational(over.basis, int_matrix(rows, width))
    if coords is None:
        raise LatticeError(f"{model.key}: {names} are not inside the glued lattice")
    return [[int(x) for x in row] for row in coords.tolist()]


def _wall_counts(report: RowReport, walls: list[list[int]], exceptional: list[list[int]], squares: list[int]) -> None:
    refined = _refined(walls, exceptional)
    report.columns.update(literal=str(len(walls)), refined=str(len(refined)))
    report.add(
        "literal count",
        Outcome.UNKNOWN,
        f"{len(walls)} classes of square in {squares} and divisibility 2; not a wall criterion by itself",
        severity="info",
    )
    report.add(
        "refined count",
        Outcome.of(not refined),
        f"{len(refined)} with w/2 in the lattice up to the exceptional halves",
        witness=str(refined[0]) if refined else None,
    )


def check_walls(catalog: Catalog, options: RunOptions) -> list[RowReport]:
    reports = []
    for key in sorted(catalog.embeddings):
        record = catalog.embeddings[key]
        if not record.wall_squares:
            continue
        host = catalog.host(record.host)
        report = _report("walls", key, f"{record.source} in {record.host}")
        exceptional = [host.integral_vector(name) for name in record.exceptional]
        _wall_counts(report, _walls(_embedded_image(catalog, key), record.wall_squares), exceptional, record.wall_squares)
        reports.append(report)

        for model_key in sorted(catalog.glue_models):
            if model_key == record.reference:
                continue
            model = catalog.glue_model(model_key)
            analogue = _report("walls", model_key, f"{model.summands[0].name} analogue")
            try:
                walls = _walls(summand_embedding(model.spec, 0), record.wall_squares)
                _wall_counts(analogue, walls, _model_vectors(model, model.record.exceptional), record.wall_squares)
            except LatcheckError as exc:
                analogue.add("refined count", Outcome.FAIL, str(exc))
            reports.append(analogue)
    return reports


# -- quotient maps -----------------------------------------------------


def _degree_check(catalog: Catalog, pf) -> tuple[Outcome, str]:
    """Pairings of basis vectors and of every catalog class on the source scale by the degree."""
    n = pf.source.rank
    basis = [[int(i == j) for j in range(n)] for i in range(n)]
    bad = [
        f"{pf.source.names[i]}.{pf.source.names[j]}"
        for i in range(n)
        for j in range(i, n)
        if not degree_holds(pf, basis[i], basis[j])
    ]
    classes = sorted(k for k, c in catalog.classes.items() if c.host == pf.source.key)
    for key in classes:
        for value in range(1, 4):
            vector = catalog.class_vector(key, {catalog.classes[key].param: value} if catalog.classes[key].param else {})
            if not degree_holds(pf, vector):
                bad.append(f"{key}({value})")
    detail = f"degree {pf.degree} on {n} basis vectors and {len(classes)} classes"
    return Outcome.of(not bad), detail + (f"; fails on {bad}" if bad else "")


def _image_gram(pf) -> tuple[Outcome, str]:
    wrong = pf.gram_mismatches()
    if wrong:
        return Outcome.FAIL, f"computed and printed {pf.record.image} differ at {wrong}"
    return Outcome.PASS, f"computed Gram equals the printed {pf.record.image}"


def check_pushforwards(catalog: Catalog, options: RunOptions) -> list[RowReport]:
    budget = options.budget
    reports = []
    for key in sorted(catalog.pushforwards):
        pf = load_pushforward(catalog, key)
        record = pf.record
        report = _report("pushforwards", key, record.source, image=record.image, degree=str(record.degree))

        def image():
            pos, neg, _ = pf.image.signature
            return Outcome.PASS, f"rank {pf.image.rank}, signature ({pos}, {neg})"

        _guard(report, "image even", image)
        _guard(report, "image genus", lambda: (same_genus(pf.image, catalog.recipe_lattice(record.image), budget), record.image))
        _guard(report, "image Gram", lambda: _image_gram(pf))
        _guard(report, "degree", lambda: _degree_check(catalog, pf))
        if not record.primitive:

            def index_two():
                isotropic = elements_with(discriminant_module(pf.image), 2, 0, budget)
                return Outcome.of(bool(isotropic)), f"{len(isotropic)} isotropic elements of order 2"

            _guard(report, "index-2 overlattice", index_two, severity="info")
        reports.append(report)
    for key in sorted(catalog.isomorphisms):
        record = catalog.isomorphisms[key]
        report = _report("pushforwards", key, "isomorphism", left=record.left, right=record.right)
        _guard(
            report,
            "same genus",
            lambda: (same_genus(catalog.recipe_lattice(record.left), catalog.recipe_lattice(record.right), budget), "genus level"),
        )
        reports.append(report)
    return reports


def check_quotient(catalog: Catalog, options: RunOptions) -> list[RowReport]:
    reports = []
    for key in sorted(catalog.quotients):
        record = catalog.quotients[key]
        report = _report("quotient", key, record.pushforward, expected=record.expected)
        pf = load_pushforward(catalog, record.pushforward)

        def genus():
            total = direct_sum([pf.image, catalog.recipe_lattice(record.extra)])
            return same_genus(total, catalog.recipe_lattice(record.expected), options.budget), record.expected

        _guard(report, "quotient genus", genus)
        if record.compare_degree_with:
            other = load_pushforward(catalog, record.compare_degree_with)

            def ratio():
                n = pf.source.rank
                factor = Fraction(pf.degree, other.degree)
                for i in range(n):
                    e = [int(i == j) for j in range(n)]
                    a, b = pushforward(pf, e), pushforward(other, e)
                    if bilinear(pf.printed.gram, a, a) != factor * bilinear(other.printed.gram, b, b):
                        return Outcome.FAIL, f"{pf.source.names[i]}"
                return Outcome.PASS, f"squares scale by {factor} against {other.key}"

            _guard(report, "degree ratio", ratio)
        reports.append(report)
    return reports


# -- partial Gram systems ----------------------------------------------


def check_partial_gram(catalog: Catalog, options: RunOptions) -> list[RowReport]:
    reports = []
    for key in sorted(catalog.partial_grams):
        record = catalog.partial_grams[key]
        report = _report("partial-gram", key, record.host, expected=record.expected)
        try:
            solution = solve_catalog_system(catalog, key)
        except LatcheckError as exc:
            report.add("consistent", Outcome.FAIL, str(exc))
            reports.append(report)
            continue
        detail = f"{solution.equations} equations, {solution.unknowns} unknowns"
        report.add("consistent", Outcome.of(solution.consistent), detail)
        if solution.consistent:
            report.add("unique", Outcome.of(solution.unique), detail)
            report.add("integral", Outcome.of(solution.integral), "completed Gram matrix")
            report.add("even", Outcome.of(solution.even), "completed Gram matrix")
            if solution.unique:
                _guard(
                    report,
                    "completion genus",
                    lambda: (completion_genus(catalog, solution, record.expected, options.budget), record.expected),
                )
            else:
                report.add("completion genus", Outcome.UNKNOWN, "solution not unique", severity="warning")
        reports.append(report)
    return reports


# -- general properties ------------------------------------------------


def _milgram(lattice: Lattice) -> tuple[Outcome, str]:
    pos, neg, _ = lattice.signature
    residue = milgram_signature(discriminant_module(lattice))
    return Outcome.of(residue == (pos - neg) % 8), f"Gauss sum {residue}, signature ({pos}, {neg})"


def _determinant_identity(sub: EmbeddedSublattice) -> tuple[Outcome, str]:
    """``|det I| |det C| = |det L| · [L : I ⊕ C]²``."""
    complement = orthogonal_complement(sub)
    stacked = int_matrix(to_rows(sub.basis) + to_rows(complement.basis), sub.ambient.rank)
    index = abs(determinant(stacked))
    lhs = abs(determinant(sub.gram) * determinant(complement.gram))
    rhs = abs(sub.ambient.determinant) * index * index
    return Outcome.of(lhs == rhs), f"{lhs} = {abs(sub.ambient.determinant)} * {index}^2"


def _e8_swap(names: list[str]):
    """Exchange of the two E8 summands ``x_i <-> y_i``."""
    n = len(names)
    matrix = identity(n)
    for i, name in enumerate(names):
        if name.startswith("x"):
            j = names.index("y" + name[1:])
            matrix[i, i] = matrix[j, j] = 0
            matrix[i, j] = matrix[j, i] = 1
    return matrix


def check_properties(catalog: Catalog, options: RunOptions) -> list[RowReport]:
    budget = options.budget
    report = _report("properties", "milgram", "Gauss sum congruence")
    names = sorted(set(catalog.lattices) | set(catalog.recipes))
    for name in names:
        _guard(report, name, lambda: _milgram(catalog.lattice(name)))
    for key in sorted(catalog.hosts):
        _guard(report, f"host {key}", lambda: _milgram(catalog.host(key).lattice))
    for key in sorted(catalog.genera):

        def genus():
            g = catalog.genus(key)
            return Outcome.PASS, f"signature {g.signature}, |A| = {g.disc.order}"

        _guard(report, f"genus {key}", genus)
    reports = [report]

    duality = _report("properties", "duality", "A_I = -A_C")

    def omega4():
        invariant = discriminant_module(catalog.host("z4-invariant").lattice)
        return fqm_isomorphic(catalog.genus("Omega4").disc, invariant.negated(), budget), "A_Omega4 vs -A(z4-invariant)"

    _guard(duality, "Omega4", omega4)
    k3 = catalog.host("lambda-k3")
    swap = _e8_swap(k3.names)
    duality.add("E8 swap isometry", Outcome.of(is_involution(swap) and preserves_form(swap, k3.lattice.gram)))

    def e8_swap():
        fixed = invariant_lattice(swap, k3.lattice)
        moved = coinvariant_lattice(swap, k3.lattice)
        a = discriminant_module(fixed.lattice())
        b = discriminant_module(moved.lattice()).negated()
        return fqm_isomorphic(a, b, budget), f"ranks {fixed.rank} + {moved.rank}"

    _guard(duality, "E8 swap", e8_swap)
    reports.append(duality)

    identity_report = _report("properties", "determinants", "|det I| |det C| = |det L| index^2")
    for key in sorted(catalog.involutions):
        _guard(identity_report, key, lambda: _determinant_identity(induced_involution(catalog, key).invariant))
    for key in sorted(catalog.embeddings):
        _guard(identity_report, key, lambda: _determinant_identity(_embedded_image(catalog, key)))
    reports.append(identity_report)
    return reports


# -- registry ----------------------------------------------------------

Target = Callable[[Catalog, RunOptions], list[RowReport]]

STRUCTURAL_TARGETS: dict[str, Target] = {
    "orbits": check_orbits,
    "z4-involution": check_z4_involution,
    "klein-involutions": check_klein_involutions,
    "glue": check_glue,
    "star": check_star,
    "walls": check_walls,
    "pushforwards": check_pushforwards,
    "quotient": check_quotient,
    "partial-gram": check_partial_gram,
    "properties": check_properties,
}

DESCRIPTIONS = {
    "z4-families": "order-four cyclic table of K3^[2]-type families",
    "klein-families": "Klein four-group table of K3^[2]-type families",
    "orbits": "order-2, square-3/2 element existence and orbit separation",
    "z4-involution": "cyclic induced involution matrix and its lattices",
    "klein-involutions": "both Klein induced involution matrices",
    "glue": "both reference glue models give the genus of LambdaN",
    "star": "glue condition on D_k(2): explicit embedding, alternative glue",
    "walls": "wall-divisor count in the explicit D6(2) image and the D4(2) analogue",
    "pushforwards": "quotient-map images and degree invariants",
    "quotient": "composed pushforward genus of the order-four quotient",
    "z4-orbifolds": "Nikulin orbifold table, cyclic case",
    "klein-orbifolds": "Nikulin orbifold table, Klein case",
    "mixed-d6": "mixed-action table with D6(2) coinvariant",
    "mixed-d4": "mixed-action table with D4(2) coinvariant",
    "partial-gram": "overlattice consistency systems",
    "properties": "Gauss sum congruence, -q duality, determinant identity",
    "all": "every target above",
}

TARGET_IDS = tuple(DESCRIPTIONS)


def expand_target(target: str) -> list[str]:
    """Concrete target ids for ``target``; ``all`` expands in listing order."""
    if target == "all":
        return [t for t in TARGET_IDS if t != "all"]
    if target not in DESCRIPTIONS:
        raise UnknownTargetError(target)
    return [target]


def run_target(catalog: Catalog, target: str, options: RunOptions) -> list[RowReport]:
    """Run one concrete target in this process."""
    if target in TABLE_TARGETS:
        return run_table(catalog, target, options)
    if target not in STRUCTURAL_TARGETS:
        raise UnknownTargetError(target)
    logger.info("running %s", target)
    return STRUCTURAL_TARGETS[target](catalog, options)


__all__ = [
    "DESCRIPTIONS",
    "RunOptions",
    "STRUCTURAL_TARGETS",
    "TABLE_TARGETS",
    "TARGET_IDS",
    "expand_target",
    "flag_ambiguous_pairings",
    "run_table",
    "run_table_jobs",
    "run_target",
    "table_jobs",
]
