from autopk.gateway.client import (
    ChatBackend,
    Gateway,
    HttpChatBackend,
    LlmRequest,
    LlmResponse,
    RateLimiter,
    RetryPolicy,
    ScriptedBackend,
    TransientBackendError,
)
from autopk.gateway.parsing import parse_csv_block, parse_variant_list, parse_verdict
from autopk.gateway.templates import (
    PK_SCHEMA,
    PK_SCHEMA_LINE,
    ChatMessage,
    PromptLibrary,
    PromptTemplate,
    TemplateId,
    column_hints,
    render,
)

__all__ = [
    "ChatBackend",
    "ChatMessage",
    "Gateway",
    "HttpChatBackend",
    "LlmRequest",
    "LlmResponse",
    "PK_SCHEMA",
    "PK_SCHEMA_LINE",
    "PromptLibrary",
    "PromptTemplate",
    "RateLimiter",
    "RetryPolicy",
    "ScriptedBackend",
    "TemplateId",
    "TransientBackendError",
    "column_hints",
    "parse_csv_block",
    "parse_variant_list",
    "parse_verdict",
    "render",
]
