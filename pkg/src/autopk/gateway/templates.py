"""Prompt templates and rendering.

Placeholders use ``{name}`` with free-form names (spaces allowed) and are
expanded in a single pass, so braces inside bound values are inert.
Few-shot exemplars ship as editable JSON data files and render as
alternating user/assistant turns ahead of the final user message.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from autopk.errors import UnboundPlaceholder

_PLACEHOLDER = re.compile(r"\{([^{}]+)\}")

PK_SCHEMA: tuple[str, ...] = (
    "pk_parameter",
    "pk_parameter_unit",
    "pk_parameter_value",
    "animal",
    "drug",
    "drug_dosage",
    "route_of_administration",
    "animal_matrix/commodity",
)
PK_SCHEMA_LINE = ", ".join(PK_SCHEMA)


class TemplateId(enum.Enum):
    VARIANT_EXTRACTION = "variant_extraction"
    VARIANT_VALIDATION = "variant_validation"
    TABLE_RECONSTRUCTION = "table_reconstruction"
    DIRECT_BASELINE = "direct_baseline"


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def as_dict(self) -> dict[str, str]:
        return {"role": self.role, "content": self.content}


@dataclass(frozen=True)
class PromptTemplate:
    template_id: TemplateId
    body: str
    shots: tuple[tuple[str, str], ...] = ()

    def with_shot_count(self, n: int) -> "PromptTemplate":
        return PromptTemplate(self.template_id, self.body, self.shots[: max(0, n)])


def render(template: PromptTemplate, bindings: dict[str, str]) -> tuple[ChatMessage, ...]:
    """Expand placeholders and prepend shots as example turns.

    Every placeholder in the body must be bound; optional table metadata
    should be bound to the literal "None" by the caller when absent.
    """

    def _sub(match: re.Match[str]) -> str:
        name = match.group(1)
        if name not in bindings:
            raise UnboundPlaceholder(
                f"{template.template_id.value}: no binding for {{{name}}}"
            )
        return bindings[name]

    messages = []
    for shot_in, shot_out in template.shots:
        messages.append(ChatMessage("user", shot_in))
        messages.append(ChatMessage("assistant", shot_out))
    messages.append(ChatMessage("user", _PLACEHOLDER.sub(_sub, template.body)))
    return tuple(messages)


VARIANT_EXTRACTION_BODY = """\
This is the table in CSV format:
{Table in CSV Format}

Extract all variants of {pk parameter} (in various forms, like {variants Aliases}) based on the table provided. Write the exact names in the format of <$variant$> using $$ symbols like $variant1$, $variant2$, etc, without adding any extra text and without further information. Only provide {pk parameter} exactly as shown in the table without any changes. If a variant is embedded in a multi-header format like random1^variant1^random2, return only what relates to variant1, e.g., $variant1$. It can be more than 1 form of {pk parameter} in the table. Do not include any forms where: {Non Variants Alias}

Answer format: $variant1$,$variant2$"""

VARIANT_VALIDATION_BODY = """\
You are checking surface forms of the pharmacokinetic parameter "{pk parameter}".
Known variants of this parameter include: {known variants}
A table scan flagged this candidate string: "{candidate}"

Is the candidate another variant of {pk parameter} (a name, abbreviation, or noisy \
spelling of the same quantity), and not a different quantity or a value? \
Answer with a single word: YES or NO."""

TABLE_RECONSTRUCTION_BODY = (
    """\
Extract PK data from any tables may appear inside a scientific document. Return one \
and only one comma-separated table with the header in the exact column order shown \
below, with no commentary, no extra columns, and no blank lines. My tables are in a \
specific text representation format in which each cell of a target row is combined \
with its header using the @ sign, and a header can combine with other headers using \
'^' if the table is multi-header. I want to convert this into a table format with \
the following columns (if not exists any data only left it with None):
"""
    + PK_SCHEMA_LINE
    + """

Extraction rules:
{Short Explanation About Each Column of Table}

This is my custom format table: {Custom Format Table}
This is footnote of my table in document: {Table Footnote}
This is caption of my table in document: {Table Caption}
This is title of my document: {Article Title}
This is abstract of my document: {Article Abstract}

Produce nothing except the final CSV lines in the order specified.

Answer format: Table in CSV comma format text."""
)

DIRECT_BASELINE_BODY = (
    """\
Extract PK data from the table of a scientific document, given below in plain CSV \
format (composite headers may combine multiple header rows with '^'). Return one \
and only one comma-separated table with the header in the exact column order shown \
below, with no commentary, no extra columns, and no blank lines. If not exists any \
data only left it with None:
"""
    + PK_SCHEMA_LINE
    + """

Extraction rules:
{Short Explanation About Each Column of Table}

This is my table in CSV format: {Table in CSV Format}
This is footnote of my table in document: {Table Footnote}
This is caption of my table in document: {Table Caption}
This is title of my document: {Article Title}
This is abstract of my document: {Article Abstract}

Produce nothing except the final CSV lines in the order specified.

Answer format: Table in CSV comma format text."""
)

_BODIES = {
    TemplateId.VARIANT_EXTRACTION: VARIANT_EXTRACTION_BODY,
    TemplateId.VARIANT_VALIDATION: VARIANT_VALIDATION_BODY,
    TemplateId.TABLE_RECONSTRUCTION: TABLE_RECONSTRUCTION_BODY,
    TemplateId.DIRECT_BASELINE: DIRECT_BASELINE_BODY,
}


class PromptLibrary:
    """Loads template bodies and few-shot exemplar data.

    ``shots_dir`` overrides the packaged defaults; ``shot_count`` trims
    (0 disables shots entirely, the 0-shot ablation).
    """

    def __init__(self, shots_dir: str | Path | None = None, shot_count: int = 5) -> None:
        self.shot_count = shot_count
        self._shots_dir = Path(shots_dir) if shots_dir is not None else None

    def _load_shots_doc(self, template_id: TemplateId) -> dict:
        name = f"{template_id.value}.json"
        if self._shots_dir is not None:
            path = self._shots_dir / name
            if not path.exists():
                return {}
            return json.loads(path.read_text(encoding="utf-8"))
        ref = resources.files("autopk.data").joinpath("shots").joinpath(name)
        if not ref.is_file():
            return {}
        return json.loads(ref.read_text(encoding="utf-8"))

    def get(self, template_id: TemplateId, parameter: str | None = None) -> PromptTemplate:
        doc = self._load_shots_doc(template_id)
        shot_list = doc.get(parameter) if parameter is not None else None
        if shot_list is None:
            shot_list = doc.get("default", [])
        shots = tuple((s["input"], s["output"]) for s in shot_list)
        return PromptTemplate(
            template_id=template_id,
            body=_BODIES[template_id],
            shots=shots[: max(0, self.shot_count)],
        )


def column_hints() -> str:
    """Per-column guidance text bound into the reconstruction prompts."""
    return (
        resources.files("autopk.data").joinpath("column_hints.txt").read_text("utf-8").strip()
    )
