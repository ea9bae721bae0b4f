"""Module API: five hooks tapped into the packet pipeline.

on_packet_received runs in the high-priority stage and may mutate, replace,
drop (return DROP) or consume (return CONSUME) the packet; returning None
passes it on unchanged.  after_packet_received runs later, in the
low-priority stage, at most once per surviving packet.
"""


class _Sentinel:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


DROP = _Sentinel("DROP")
CONSUME = _Sentinel("CONSUME")


class UnknownCommandError(Exception):
    pass


class NodeModule:
    name = "module"
    priority_order = 100
    loop_stage = "low"      # "high" modules get on_loop in the hot pass

    def __init__(self):
        self.enabled = True

    # lifecycle ---------------------------------------------------------
    def on_init(self, node):
        pass

    def on_loop(self, node):
        pass

    def on_user_command(self, node, verb, fields):
        raise UnknownCommandError(verb)

    # packet path --------------------------------------------------------
    def on_packet_received(self, node, pkt):
        return pkt

    def after_packet_received(self, node, pkt):
        pass

    # RPC schema -----------------------------------------------------------
    def commands(self) -> dict:
        """verb -> {field: FieldSpec-dict}; drives schema introspection."""
        return {}

    def events(self) -> dict:
        return {}
