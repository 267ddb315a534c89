"""Pipeline 1: build the per-parameter variant list and locate every hit.

Stages: seed the registry by prompting a model per table, then make one
ordered pass over the corpus scanning every body cell and header fragment.
Exact registry hits match immediately; near misses above the similarity
threshold become candidates that a validation prompt admits or rejects.
Admitted candidates join the registry mid-run, so later tables (and later
cells of the same table) see them as exact matches.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

from autopk.errors import UnparseableVerdict
from autopk.gateway import (
    Gateway,
    PromptLibrary,
    TemplateId,
    parse_variant_list,
    parse_verdict,
    render,
)
from autopk.similarity import ComponentCache, SimilarityWeights, hybrid_similarity
from autopk.similarity.embeddings import EmbeddingProvider
from autopk.tables import Axis, CellRef, NormalizedTable, header_fragments, serialize_csv

log = logging.getLogger(__name__)

VALIDATION_EXEMPLAR_CAP = 10


@dataclass(frozen=True)
class PkParameter:
    """A target parameter with prompt hints for aliases and known traps."""

    canonical_name: str
    display: str = ""
    alias_hints: tuple[str, ...] = ()
    exclusion_hints: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.display:
            object.__setattr__(self, "display", self.canonical_name)


def load_parameter(name: str, path: str | Path | None = None) -> PkParameter:
    """Load a parameter definition from the packaged (or given) catalog."""
    if path is not None:
        catalog = json.loads(Path(path).read_text(encoding="utf-8"))
    else:
        catalog = json.loads(
            resources.files("autopk.data").joinpath("parameters.json").read_text("utf-8")
        )
    if name not in catalog:
        known = ", ".join(sorted(catalog))
        raise KeyError(f"unknown PK parameter {name!r}; catalog has: {known}")
    entry = catalog[name]
    return PkParameter(
        canonical_name=name,
        display=entry.get("display", name),
        alias_hints=tuple(entry.get("alias_hints", ())),
        exclusion_hints=tuple(entry.get("exclusion_hints", ())),
    )


@dataclass(frozen=True)
class VariantMatch:
    variant_text: str
    location: CellRef
    provenance: str  # "seed" | "exact" | "hybrid_validated"
    score: float


@dataclass
class VariantRegistry:
    """Evolving ordered set of variant surface forms with an audit trail."""

    parameter: PkParameter
    _entries: dict[str, dict] = field(default_factory=dict)
    audit_log: list[dict] = field(default_factory=list)

    @property
    def variants(self) -> list[str]:
        return list(self._entries)

    def __contains__(self, text: str) -> bool:
        return text.strip() in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def add(
        self,
        text: str,
        provenance: str,
        origin_table: str,
        score: float = 1.0,
        decision: str = "",
    ) -> bool:
        """Insert a trimmed variant. Returns False for duplicates."""
        trimmed = text.strip()
        if not trimmed or trimmed in self._entries:
            return False
        self._entries[trimmed] = {
            "text": trimmed,
            "provenance": provenance,
            "score": score,
            "origin_table": origin_table,
        }
        if decision:
            self.log(trimmed, origin_table, decision)
        return True

    def log(self, variant: str, origin_table: str, decision: str) -> None:
        self.audit_log.append(
            {"variant": variant, "origin_table": origin_table, "decision": decision}
        )

    def prune(self, keep: set[str], origin: str = "manual-review") -> None:
        """Manual false-positive removal between seeding and scanning."""
        for text in list(self._entries):
            if text not in keep:
                del self._entries[text]
                self.log(text, origin, "dropped in manual review")
        for text in self._entries:
            self.log(text, origin, "kept in manual review")

    def to_json(self) -> dict:
        return {
            "parameter": self.parameter.canonical_name,
            "variants": list(self._entries.values()),
            "audit_log": self.audit_log,
        }

    def save(self, path: str | Path) -> None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(
            json.dumps(self.to_json(), indent=1, ensure_ascii=False, sort_keys=True)
            + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(cls, path: str | Path, parameter: PkParameter | None = None) -> "VariantRegistry":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        param = parameter or PkParameter(canonical_name=doc["parameter"])
        reg = cls(parameter=param)
        for entry in doc["variants"]:
            reg._entries[entry["text"]] = dict(entry)
        reg.audit_log = list(doc.get("audit_log", []))
        return reg


def _bind_meta(value: str | None) -> str:
    return value if value not in (None, "") else "None"


def extract_seed_variants(
    corpus: list[NormalizedTable],
    param: PkParameter,
    gateway: Gateway,
    prompts: PromptLibrary | None = None,
) -> VariantRegistry:
    """Prompt a model table by table and union the parsed variant lists."""
    prompts = prompts or PromptLibrary()
    template = prompts.get(TemplateId.VARIANT_EXTRACTION, param.canonical_name)
    registry = VariantRegistry(parameter=param)
    for table in corpus:
        bindings = {
            "Table in CSV Format": serialize_csv(table),
            "pk parameter": param.display,
            "variants Aliases": ", ".join(param.alias_hints) or "None",
            "Non Variants Alias": "; ".join(param.exclusion_hints) or "None",
        }
        response = gateway.complete_for(
            "variant_extraction", render(template, bindings)
        )
        for variant in parse_variant_list(response.text):
            registry.add(
                variant,
                provenance="seed",
                origin_table=table.provenance_id,
                decision="seed extraction",
            )
    if not registry:
        log.warning("seed extraction produced an empty registry for %s", param.canonical_name)
    return registry


def _iter_cells(table: NormalizedTable):
    """Header fragments first (fragment index in row), then body row-major."""
    for col, header in enumerate(table.header):
        for k, fragment in enumerate(header_fragments(header)):
            yield fragment, CellRef(row=k, col=col, axis=Axis.HEADER)
    for i, row in enumerate(table.rows):
        for j, cell in enumerate(row):
            yield cell, CellRef(row=i, col=j, axis=Axis.BODY)


def scan_table(
    table: NormalizedTable,
    registry: VariantRegistry,
    w: SimilarityWeights,
    embed: EmbeddingProvider | None = None,
    cache: ComponentCache | None = None,
    em_only: bool = False,
    exact_case_insensitive: bool = False,
    on_candidate: Callable[[str, CellRef, float], bool] | None = None,
) -> tuple[list[VariantMatch], list[tuple[str, CellRef, float]]]:
    """One pass over header fragments and body cells.

    Exact registry hits (string equality after trimming) match at score
    1.0.  Otherwise the best hybrid score against the registry decides:
    at or above tau the cell is a candidate.  With ``on_candidate`` set,
    candidates are resolved inline; an admission mutates the registry and
    records a hybrid match, so later cells of this table see the new
    variant.  Without the callback, candidates are returned for the
    caller to resolve.
    """
    matches: list[VariantMatch] = []
    candidates: list[tuple[str, CellRef, float]] = []
    lowered = {v.lower(): v for v in registry.variants} if exact_case_insensitive else {}
    for text, ref in _iter_cells(table):
        trimmed = text.strip()
        if not trimmed:
            continue
        if trimmed in registry or (exact_case_insensitive and trimmed.lower() in lowered):
            matches.append(
                VariantMatch(trimmed, ref, provenance="exact", score=1.0)
            )
            continue
        if em_only:
            continue
        best = 0.0
        for variant in registry.variants:
            score = hybrid_similarity(trimmed, variant, w, embed, cache)
            if score > best:
                best = score
        if best >= w.tau:
            if on_candidate is None:
                candidates.append((trimmed, ref, best))
            elif on_candidate(trimmed, ref, best):
                if exact_case_insensitive:
                    lowered[trimmed.lower()] = trimmed
                matches.append(
                    VariantMatch(trimmed, ref, provenance="hybrid_validated", score=best)
                )
    return matches, candidates


def validate_candidate(
    candidate: str,
    registry: VariantRegistry,
    gateway: Gateway,
    prompts: PromptLibrary | None = None,
    origin_table: str = "",
    score: float = 0.0,
) -> bool:
    """Ask the validation prompt for a strict YES/NO on one candidate.

    YES admits the candidate into the registry; NO and unparseable
    verdicts both reject (fail closed), and every outcome is logged.
    """
    prompts = prompts or PromptLibrary()
    template = prompts.get(TemplateId.VARIANT_VALIDATION, registry.parameter.canonical_name)
    known = registry.variants[:VALIDATION_EXEMPLAR_CAP]
    bindings = {
        "pk parameter": registry.parameter.display,
        "known variants": ", ".join(known) or "None",
        "candidate": candidate,
    }
    response = gateway.complete_for("variant_validation", render(template, bindings))
    try:
        verdict = parse_verdict(response.text)
    except UnparseableVerdict:
        registry.log(candidate, origin_table, "rejected: unparseable verdict")
        return False
    if verdict:
        registry.add(
            candidate,
            provenance="hybrid_validated",
            origin_table=origin_table,
            score=score,
            decision="validated YES",
        )
        return True
    registry.log(candidate, origin_table, "rejected: validation NO")
    return False


def run_pipeline1(
    corpus: list[NormalizedTable],
    param: PkParameter,
    w: SimilarityWeights,
    gateway: Gateway,
    embed: EmbeddingProvider | None = None,
    prompts: PromptLibrary | None = None,
    registry: VariantRegistry | None = None,
    em_only: bool = False,
    no_validate: bool = False,
    exact_case_insensitive: bool = False,
    cache: ComponentCache | None = None,
) -> tuple[dict[str, list[VariantMatch]], VariantRegistry]:
    """Seed (unless a registry is supplied), then scan tables in id order.

    ``em_only`` disables hybrid candidates entirely; ``no_validate``
    admits every candidate at or above tau without asking the model.
    """
    prompts = prompts or PromptLibrary()
    ordered = sorted(corpus, key=lambda t: t.provenance_id)
    if registry is None:
        registry = extract_seed_variants(ordered, param, gateway, prompts)
    cache = cache or ComponentCache()

    all_matches: dict[str, list[VariantMatch]] = {}
    for table in ordered:

        def admit(candidate: str, ref: CellRef, score: float) -> bool:
            if no_validate:
                return registry.add(
                    candidate,
                    provenance="hybrid_validated",
                    origin_table=table.provenance_id,
                    score=score,
                    decision="auto-admitted (validation disabled)",
                )
            return validate_candidate(
                candidate,
                registry,
                gateway,
                prompts,
                origin_table=table.provenance_id,
                score=score,
            )

        matches, _ = scan_table(
            table,
            registry,
            w,
            embed,
            cache,
            em_only=em_only,
            exact_case_insensitive=exact_case_insensitive,
            on_candidate=None if em_only else admit,
        )
        all_matches[table.provenance_id] = matches
    return all_matches, registry


def matches_to_json(all_matches: dict[str, list[VariantMatch]]) -> dict:
    return {
        table_id: [
            {
                "variant_text": m.variant_text,
                "row": m.location.row,
                "col": m.location.col,
                "axis": m.location.axis.value,
                "score": m.score,
                "provenance": m.provenance,
            }
            for m in matches
        ]
        for table_id, matches in all_matches.items()
    }


def matches_from_json(doc: dict) -> dict[str, list[VariantMatch]]:
    out: dict[str, list[VariantMatch]] = {}
    for table_id, items in doc.items():
        out[table_id] = [
            VariantMatch(
                variant_text=item["variant_text"],
                location=CellRef(item["row"], item["col"], Axis(item["axis"])),
                provenance=item["provenance"],
                score=item["score"],
            )
            for item in items
        ]
    return out


def save_matches(all_matches: dict[str, list[VariantMatch]], path: str | Path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(
        json.dumps(matches_to_json(all_matches), indent=1, ensure_ascii=False, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )


def load_matches(path: str | Path) -> dict[str, list[VariantMatch]]:
    return matches_from_json(json.loads(Path(path).read_text(encoding="utf-8")))
