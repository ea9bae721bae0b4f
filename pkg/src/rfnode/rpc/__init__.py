from rfnode.rpc.framing import FrameDecoder, FrameError, encode_frame
from rfnode.rpc.schema import OPS, RADIO_MODES, build_schema, field, validate_fields

__all__ = [
    "FrameDecoder", "FrameError", "encode_frame",
    "OPS", "RADIO_MODES", "build_schema", "field", "validate_fields",
]
