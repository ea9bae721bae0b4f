"""Topic/field catalog and payload validation.

Every module declares its command verbs as {field: spec} dicts; the node
assembles the full descriptor on demand.  Clients are expected to build
their entire call surface from this descriptor, so adding a verb or field
server-side needs no client change.
"""

from rfnode.core.node import TOPIC_ROOT

# Byte/splice operations of the packet rewrite engine, in wire order.
OPS = ("AND", "OR", "XOR", "NOT", "SLEFT", "SRIGHT", "PREPEND", "APPEND", "INSERT")

RADIO_MODES = ("IDLE", "RX", "TX", "PROMISCUOUS", "JAM")

TYPES = ("int", "float", "bool", "str", "bytes", "enum")


def field(type_: str, required: bool = False, enum: str = None, doc: str = ""):
    if type_ not in TYPES:
        raise ValueError(type_)
    spec = {"type": type_, "required": required}
    if enum:
        spec["enum"] = enum
    if doc:
        spec["doc"] = doc
    return spec


ENUMS = {"Op": list(OPS), "Mode": list(RADIO_MODES)}


class ValidationError(ValueError):
    pass


def validate_fields(spec: dict, payload: dict, enums: dict = None) -> dict:
    """Check payload against a verb's field specs; returns coerced values."""
    enums = enums or ENUMS
    payload = payload or {}
    clean = {}
    for name in payload:
        if name not in spec:
            raise ValidationError(f"unknown field {name!r}")
    for name, fs in spec.items():
        if name not in payload:
            if fs.get("required"):
                raise ValidationError(f"missing required field {name!r}")
            continue
        value = payload[name]
        t = fs["type"]
        try:
            if t == "int":
                clean[name] = int(value)
            elif t == "float":
                clean[name] = float(value)
            elif t == "bool":
                if not isinstance(value, bool):
                    raise ValidationError(f"field {name!r} must be a boolean")
                clean[name] = value
            elif t == "str":
                clean[name] = str(value)
            elif t == "bytes":
                bytes.fromhex(value)  # raises on bad hex
                clean[name] = str(value).lower()
            elif t == "enum":
                allowed = enums[fs["enum"]]
                if value not in allowed:
                    raise ValidationError(
                        f"field {name!r} must be one of {allowed}")
                clean[name] = value
        except ValidationError:
            raise
        except (TypeError, ValueError):
            raise ValidationError(f"field {name!r}: bad {t} value {value!r}") from None
    return clean


def build_schema(node) -> dict:
    modules = {}
    for name, module in node.modules.items():
        modules[name] = {
            "commands": module.commands(),
            "events": module.events(),
        }
    return {
        "version": 1,
        "topicRoot": TOPIC_ROOT,
        "enums": dict(ENUMS),
        "modules": modules,
    }


def iter_command_topics(schema: dict):
    root = schema["topicRoot"]
    for mod, desc in schema["modules"].items():
        for verb, fields in desc["commands"].items():
            yield f"{root}/in/{mod}/{verb}", fields
