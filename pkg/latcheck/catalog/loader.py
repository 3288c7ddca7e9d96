"""Catalog loading, validation and name resolution."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Mapping, Sequence, TypeVar

import sympy
from pydantic import BaseModel, ValidationError

from latcheck.catalog.recipes import (
    Candidate,
    RecipeEvaluator,
    bordered,
    evaluate_int,
    family_gram,
    parse_recipe,
    single_lattice,
)
from latcheck.constants import CATALOG_DIR, CATALOG_FILES
from latcheck.errors import CatalogError, LatcheckError, LatticeError
from latcheck.genus.genus import GenusDescriptor
from latcheck.lattice.core import GlueSpec, Lattice
from latcheck.linalg.exact import int_matrix
from latcheck.models import (
    ClassRecord,
    EmbeddingRecord,
    FamilyRecord,
    GenusRecord,
    GlueModelRecord,
    HostRecord,
    InvolutionRecord,
    IsomorphismRecord,
    LatticeRecord,
    PartialGramRecord,
    PushforwardRecord,
    QuotientRecord,
    RelationRecord,
    TableRecord,
)
from latcheck.torsion.module import TorsionQuadraticModule, discriminant_module

logger = logging.getLogger(__name__)

Model = TypeVar("Model", bound=BaseModel)
Values = Mapping[str, int]


def linear_form(
    text: str,
    names: Sequence[str],
    values: Values | None = None,
    extra: Mapping[str, Sequence[Fraction]] | None = None,
) -> list[Fraction]:
    """
    Coordinates of a linear expression in ``names``.

    ``values`` substitutes integer parameters; ``extra`` maps further symbols
    to coordinate vectors (used for derived classes).
    """
    values = dict(values or {})
    extra = dict(extra or {})
    symbols = {n: sympy.Symbol(n) for n in [*names, *values, *extra]}
    try:
        expr = sympy.sympify(text, locals=symbols)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise LatticeError(f"cannot parse vector '{text}': {exc}") from exc
    expr = sympy.expand(expr.subs({symbols[k]: v for k, v in values.items()}))
    unknown = expr.free_symbols - {symbols[n] for n in [*names, *extra]}
    if unknown:
        raise LatticeError(f"vector '{text}' uses unknown names {sorted(map(str, unknown))}")
    coords = [Fraction(0)] * len(names)
    position = {n: i for i, n in enumerate(names)}
    for term in sympy.Add.make_args(expr):
        coeff, rest = term.as_coeff_Mul()
        if rest == 1:
            raise LatticeError(f"vector '{text}' has a constant term {term}")
        if not isinstance(rest, sympy.Symbol) or not coeff.is_Rational:
            raise LatticeError(f"vector '{text}' is not linear: {term}")
        c = Fraction(int(coeff.p), int(coeff.q))
        name = str(rest)
        if name in position:
            coords[position[name]] += c
        else:
            coords = [a + c * b for a, b in zip(coords, extra[name])]
    return coords


@dataclass(eq=False)
class Host:
    """Lattice with named basis vectors."""

    key: str
    lattice: Lattice
    names: list[str]

    def __post_init__(self) -> None:
        if len(self.names) != self.lattice.rank:
            raise LatticeError(f"{self.key}: {len(self.names)} basis names for rank {self.lattice.rank}")
        if len(set(self.names)) != len(self.names):
            raise LatticeError(f"{self.key}: repeated basis names")

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def vector(self, text: str, values: Values | None = None) -> list[Fraction]:
        return linear_form(text, self.names, values)

    def integral_vector(self, text: str, values: Values | None = None) -> list[int]:
        coords = self.vector(text, values)
        if any(c.denominator != 1 for c in coords):
            raise LatticeError(f"{self.key}: '{text}' is not an integral vector")
        return [int(c) for c in coords]


@dataclass(eq=False)
class GlueModel:
    """Explicit overlattice of a two-summand direct sum."""

    key: str
    spec: GlueSpec
    names: list[str]
    record: GlueModelRecord

    @property
    def summands(self) -> list[Lattice]:
        return self.spec.summands


@dataclass(eq=False)
class Catalog:
    """Validated catalog records plus derived lattices."""

    directory: Path
    lattices: dict[str, LatticeRecord] = field(default_factory=dict)
    recipes: dict[str, str] = field(default_factory=dict)
    genera: dict[str, GenusRecord] = field(default_factory=dict)
    hosts: dict[str, HostRecord] = field(default_factory=dict)
    classes: dict[str, ClassRecord] = field(default_factory=dict)
    glue_models: dict[str, GlueModelRecord] = field(default_factory=dict)
    involutions: dict[str, InvolutionRecord] = field(default_factory=dict)
    embeddings: dict[str, EmbeddingRecord] = field(default_factory=dict)
    pushforwards: dict[str, PushforwardRecord] = field(default_factory=dict)
    quotients: dict[str, QuotientRecord] = field(default_factory=dict)
    isomorphisms: dict[str, IsomorphismRecord] = field(default_factory=dict)
    relations: dict[str, RelationRecord] = field(default_factory=dict)
    tables: dict[str, TableRecord] = field(default_factory=dict)
    partial_grams: dict[str, PartialGramRecord] = field(default_factory=dict)
    gram_targets: dict[str, list[list[Any]]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._lattice_cache: dict[str, Lattice] = {}
        self._genus_cache: dict[str, GenusDescriptor] = {}
        self._host_cache: dict[str, Host] = {}
        self._glue_cache: dict[str, GlueModel] = {}

    # -- sections ------------------------------------------------------

    @property
    def sections(self) -> dict[str, dict[str, Any]]:
        return {
            "lattices": self.lattices,
            "recipes": self.recipes,
            "genera": self.genera,
            "hosts": self.hosts,
            "classes": self.classes,
            "glue": self.glue_models,
            "involutions": self.involutions,
            "embeddings": self.embeddings,
            "pushforwards": self.pushforwards,
            "quotients": self.quotients,
            "isomorphisms": self.isomorphisms,
            "relations": self.relations,
            "tables": self.tables,
            "partial_grams": self.partial_grams,
        }

    def keys(self) -> list[str]:
        return [f"{section}/{name}" for section, entries in self.sections.items() for name in entries]

    def _find(self, key: str) -> tuple[str, str, Any]:
        if "/" in key:
            section, name = key.split("/", 1)
            entries = self.sections.get(section, {})
            if name in entries:
                return section, name, entries[name]
        else:
            for section, entries in self.sections.items():
                if key in entries:
                    return section, key, entries[key]
        raise CatalogError(key, "no such catalog entry")

    def dump(self, key: str) -> dict[str, Any]:
        """Record behind ``key`` plus derived invariants where cheap."""
        section, name, record = self._find(key)
        data: dict[str, Any] = {"key": f"{section}/{name}"}
        if isinstance(record, BaseModel):
            data.update(record.model_dump(mode="json", exclude_none=True))
        else:
            data["recipe"] = record
        if section in ("lattices", "recipes", "hosts"):
            lattice = self.lattice(name) if section != "hosts" else self.host(name).lattice
            pos, neg, _ = lattice.signature
            data["rank"] = lattice.rank
            data["signature"] = [pos, neg]
            data["determinant"] = lattice.determinant
            data["discriminant"] = discriminant_module(lattice).to_dict()
        elif section == "genera":
            genus = self.genus(name)
            data["discriminant"] = genus.disc.to_dict()
        return data

    # -- lattices, genera, recipes ------------------------------------

    def lattice(self, name: str) -> Lattice:
        if name in self._lattice_cache:
            return self._lattice_cache[name]
        if name in self.lattices:
            record = self.lattices[name]
            lattice = Lattice(int_matrix(record.gram), label=name)
        elif name in self.recipes:
            lattice = single_lattice(self.recipe(self.recipes[name]), name)
            lattice = Lattice(lattice.gram, label=name)
        else:
            raise CatalogError(name, "no such lattice")
        self._lattice_cache[name] = lattice
        return lattice

    def genus(self, name: str) -> GenusDescriptor:
        if name in self._genus_cache:
            return self._genus_cache[name]
        record = self.genera.get(name)
        if record is None:
            raise CatalogError(name, "no such genus")
        if record.disc is not None:
            disc = TorsionQuadraticModule.from_dict(record.disc.model_dump())
        elif record.negated_disc_of is not None:
            source = single_lattice(self.recipe(record.negated_disc_of), record.negated_disc_of)
            disc = discriminant_module(source).negated()
        else:
            raise CatalogError(name, "genus needs 'disc' or 'negated_disc_of'", record.provenance)
        genus = GenusDescriptor(record.signature, disc, label=name)
        self._genus_cache[name] = genus
        return genus

    def family(self, table: TableRecord, name: str, values: Values) -> Lattice:
        record: FamilyRecord = table.families[name]
        if record.param not in values:
            raise LatticeError(f"family {name} needs a value for '{record.param}'")
        if record.bordered is not None:
            base = self.family(table, record.bordered.family, values)
            rows = bordered([[int(x) for x in row] for row in base.gram], record.bordered.corner)
        else:
            rows = family_gram(record.gram or [], {record.param: values[record.param]})
        label = f"{name}_{values[record.param]}"
        return Lattice(int_matrix(rows), label=label)

    def resolve(self, name: str, values: Values, scope: TableRecord | None = None):
        if scope is not None and name in scope.families:
            return self.family(scope, name, values)
        if name in self.lattices:
            return self.lattice(name)
        if name in self.recipes:
            return self.recipe(self.recipes[name])
        if name in self.genera:
            return self.genus(name)
        raise LatticeError(f"unknown lattice name '{name}'")

    def recipe(
        self,
        text: str,
        values: Values | None = None,
        scope: TableRecord | None = None,
        budget: int | None = None,
    ) -> list[Candidate]:
        """Every lattice or genus the recipe denotes (one unless it glues)."""
        evaluator = RecipeEvaluator(lambda name, vals: self.resolve(name, vals, scope), budget)
        return evaluator.evaluate(text, values)

    def recipe_lattice(self, text: str, values: Values | None = None, scope: TableRecord | None = None) -> Lattice:
        return single_lattice(self.recipe(text, values, scope), text)

    # -- hosts, classes, glue models ----------------------------------

    def host(self, key: str) -> Host:
        if key not in self._host_cache:
            record = self.hosts.get(key)
            if record is None:
                raise CatalogError(key, "no such host lattice")
            lattice = self.recipe_lattice(record.recipe)
            self._host_cache[key] = Host(key, Lattice(lattice.gram, label=key), list(record.basis))
        return self._host_cache[key]

    def class_vector(self, key: str, values: Values | None = None) -> list[int]:
        record = self.classes.get(key)
        if record is None:
            raise CatalogError(key, "no such class")
        return self.host(record.host).integral_vector(record.expr, values)

    def glue_model(self, key: str) -> GlueModel:
        if key not in self._glue_cache:
            record = self.glue_models.get(key)
            if record is None:
                raise CatalogError(key, "no such glue model")
            summands = []
            names: list[str] = []
            for part in record.summands:
                lattice = self.recipe_lattice(part.recipe)
                if lattice.rank != len(part.names):
                    raise LatticeError(f"summand {part.recipe} has rank {lattice.rank}, {len(part.names)} names given")
                summands.append(Lattice(lattice.gram, label=part.recipe))
                names.extend(part.names)
            unknown = [name for name in record.exceptional if name not in names]
            if unknown:
                raise LatticeError(f"exceptional classes {unknown} are not summand names")
            vectors = [linear_form(v, names) for v in record.vectors]
            spec = GlueSpec(summands, vectors, label=key)
            self._glue_cache[key] = GlueModel(key, spec, names, record)
        return self._glue_cache[key]

    def table(self, key: str) -> TableRecord:
        if key not in self.tables:
            raise CatalogError(key, "no such table")
        return self.tables[key]

    def relation(self, key: str, value: int) -> dict[str, int]:
        record = self.relations[key]
        residue = value % record.modulus
        return {
            name: evaluate_int(exprs[residue], {record.variable: value}, f"{key}.{name}")
            for name, exprs in record.values.items()
        }

    # -- validation ----------------------------------------------------

    def validate(self) -> None:
        """Build every derived object once; raise ``CatalogError`` on the first bad entry."""
        checks = [
            *((f"lattices/{k}", lambda k=k: self.lattice(k), r.provenance) for k, r in self.lattices.items()),
            *((f"recipes/{k}", lambda k=k: self.lattice(k), None) for k in self.recipes),
            *((f"genera/{k}", lambda k=k: self.genus(k), r.provenance) for k, r in self.genera.items()),
            *((f"hosts/{k}", lambda k=k: self.host(k), r.provenance) for k, r in self.hosts.items()),
            *((f"classes/{k}", lambda k=k: self._check_class(k), r.provenance) for k, r in self.classes.items()),
            *((f"glue/{k}", lambda k=k: self.glue_model(k), r.provenance) for k, r in self.glue_models.items()),
            *((f"involutions/{k}", lambda k=k: self._check_involution(k), r.provenance) for k, r in self.involutions.items()),
            *((f"embeddings/{k}", lambda k=k: self._check_embedding(k), r.provenance) for k, r in self.embeddings.items()),
            *((f"pushforwards/{k}", lambda k=k: self._check_pushforward(k), r.provenance) for k, r in self.pushforwards.items()),
            *((f"tables/{k}", lambda k=k: self._check_table(k), r.provenance) for k, r in self.tables.items()),
            *((f"partial_grams/{k}", lambda k=k: self._check_partial_gram(k), r.provenance) for k, r in self.partial_grams.items()),
        ]
        for key, build, provenance in checks:
            try:
                build()
            except CatalogError:
                raise
            except (LatcheckError, ValueError, KeyError) as exc:
                raise CatalogError(key, str(exc), provenance) from exc
        logger.debug("catalog %s validated (%d entries)", self.directory, len(checks))

    def _check_class(self, key: str) -> None:
        record = self.classes[key]
        host = self.host(record.host)
        values = {record.param: 1} if record.param else {}
        host.vector(record.expr, values)

    def _check_involution(self, key: str) -> None:
        record = self.involutions[key]
        n = self.host(record.host).rank
        if len(record.matrix) != n or any(len(row) != n for row in record.matrix):
            raise LatticeError(f"matrix must be {n}x{n}")

    def _check_embedding(self, key: str) -> None:
        record = self.embeddings[key]
        host = self.host(record.host)
        source = self.recipe_lattice(record.source)
        if len(record.vectors) != source.rank:
            raise LatticeError(f"{len(record.vectors)} images for a rank-{source.rank} source")
        for text in record.vectors.values():
            host.integral_vector(text)
        if record.reference is not None and record.reference not in self.glue_models:
            raise LatticeError(f"unknown glue model '{record.reference}'")
        unknown = [name for name in record.exceptional if name not in host.names]
        if unknown:
            raise LatticeError(f"exceptional classes {unknown} are not host basis names")

    def _check_pushforward(self, key: str) -> None:
        record = self.pushforwards[key]
        host = self.host(record.source)
        if len(record.generators) != host.rank:
            raise LatticeError(f"{len(record.generators)} generators for a rank-{host.rank} source")
        for text in record.generators:
            host.vector(text)
        image = self.recipe_lattice(record.image)
        if image.rank != host.rank:
            raise LatticeError(f"printed image has rank {image.rank}, source has rank {host.rank}")

    def _check_table(self, key: str) -> None:
        table = self.tables[key]
        for name, family in table.families.items():
            if family.bordered is not None and family.bordered.family not in table.families:
                raise LatticeError(f"family {name} borders unknown family {family.bordered.family}")
            if family.gram is not None:
                n = len(family.gram)
                if any(len(row) != n for row in family.gram):
                    raise LatticeError(f"family {name} is not square")
                if any(str(family.gram[i][j]) != str(family.gram[j][i]) for i in range(n) for j in range(n)):
                    raise LatticeError(f"family {name} is not symmetric")
        if table.host is not None:
            self.host(table.host)
        seen = set()
        for row in table.rows:
            if row.id in seen:
                raise LatticeError(f"duplicate row id {row.id}")
            seen.add(row.id)
            for text in (row.ns, row.t, row.t_corrected):
                if text:
                    parse_recipe(text)
            if row.polarization and row.polarization not in self.classes:
                raise LatticeError(f"row {row.id}: unknown class {row.polarization}")
            if row.star and row.star not in self.glue_models:
                raise LatticeError(f"row {row.id}: unknown glue model {row.star}")
            if row.congruence and row.congruence[0] < 1:
                raise LatticeError(f"row {row.id}: modulus must be positive")
            if row.mjh and "mjh" not in self.relations:
                raise LatticeError(f"row {row.id}: parameter relation 'mjh' is missing")
            if row.source is not None:
                source = self.tables.get(row.source.table)
                if source is None:
                    raise LatticeError(f"row {row.id}: unknown source table {row.source.table}")
                ids = {r.id for r in source.rows}
                missing = [r for r in row.source.rows if r not in ids]
                if missing:
                    raise LatticeError(f"row {row.id}: unknown source rows {missing}")
                pushed = self.pushforwards.get(row.source.pushforward or "")
                if row.source.pushforward and pushed is None:
                    raise LatticeError(f"row {row.id}: unknown pushforward {row.source.pushforward}")
                for source_row in source.rows:
                    polarization = source_row.polarization
                    if pushed is not None and source_row.id in row.source.rows and polarization:
                        if self.classes[polarization].host != pushed.source:
                            raise LatticeError(
                                f"row {row.id}: class {polarization} lives on "
                                f"{self.classes[polarization].host}, not on {pushed.source}"
                            )

    def _check_partial_gram(self, key: str) -> None:
        record = self.partial_grams[key]
        self.host(record.host)
        target = self.gram_targets.get(record.target)
        if target is None:
            raise LatticeError(f"unknown target Gram '{record.target}'")
        n = len(record.generators)
        if len(target) != n or any(len(row) != n for row in target):
            raise LatticeError(f"target Gram must be {n}x{n}")
        parse_recipe(record.expected)


def _read(directory: Path, filename: str) -> dict[str, Any]:
    path = directory / filename
    if not path.exists():
        raise CatalogError(filename, f"missing catalog file {path}")
    try:
        with path.open("r", encoding="utf-8") as handle:
            data = json.load(handle)
    except json.JSONDecodeError as exc:
        raise CatalogError(filename, f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CatalogError(filename, "top level must be an object")
    return data


def _section(data: Mapping[str, Any], filename: str, name: str, model: type[Model]) -> dict[str, Model]:
    raw = data.get(name, {})
    if not isinstance(raw, dict):
        raise CatalogError(f"{filename}:{name}", "section must be an object")
    out = {}
    for key, entry in raw.items():
        try:
            out[key] = model.model_validate(entry)
        except ValidationError as exc:
            provenance = entry.get("provenance") if isinstance(entry, dict) else None
            first = exc.errors()[0]
            where = ".".join(str(p) for p in first["loc"])
            raise CatalogError(f"{name}/{key}", f"{where}: {first['msg']}", provenance) from exc
    return out


def load_catalog(directory: Path | str | None = None, validate: bool = True) -> Catalog:
    """Read and validate every catalog file under ``directory``."""
    root = Path(directory) if directory is not None else CATALOG_DIR
    files = {name: _read(root, name) for name in CATALOG_FILES}
    constants = files["constants.json"]
    recipes = constants.get("recipes", {})
    if not all(isinstance(v, str) for v in recipes.values()):
        raise CatalogError("recipes", "recipes must be strings")
    targets = files["partial_grams.json"].get("targets", {})
    catalog = Catalog(
        directory=root,
        lattices=_section(constants, "constants.json", "lattices", LatticeRecord),
        recipes=dict(recipes),
        genera=_section(constants, "constants.json", "genera", GenusRecord),
        hosts=_section(files["classes.json"], "classes.json", "hosts", HostRecord),
        classes=_section(files["classes.json"], "classes.json", "classes", ClassRecord),
        glue_models=_section(files["glue.json"], "glue.json", "models", GlueModelRecord),
        involutions=_section(files["involutions.json"], "involutions.json", "involutions", InvolutionRecord),
        embeddings=_section(files["involutions.json"], "involutions.json", "embeddings", EmbeddingRecord),
        pushforwards=_section(files["pushforwards.json"], "pushforwards.json", "pushforwards", PushforwardRecord),
        quotients=_section(files["pushforwards.json"], "pushforwards.json", "quotients", QuotientRecord),
        isomorphisms=_section(files["pushforwards.json"], "pushforwards.json", "isomorphisms", IsomorphismRecord),
        relations=_section(files["tables.json"], "tables.json", "relations", RelationRecord),
        tables=_section(files["tables.json"], "tables.json", "tables", TableRecord),
        partial_grams=_section(files["partial_grams.json"], "partial_grams.json", "systems", PartialGramRecord),
        gram_targets=dict(targets),
    )
    if validate:
        catalog.validate()
    logger.info("loaded catalog from %s", root)
    return catalog


__all__ = ["Catalog", "GlueModel", "Host", "linear_form", "load_catalog"]
