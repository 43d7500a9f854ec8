from ._tml import Session, TmlError, eval_expr, parse_pretty, reserialize, \
    replay_document, trace_document, type_of

__all__ = [
    "Session", "TmlError", "eval_expr", "parse_pretty", "reserialize",
    "replay_document", "trace_document", "type_of",
]
