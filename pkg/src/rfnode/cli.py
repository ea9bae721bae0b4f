"""Node CLI.

    rfq-node --scenario keyfob.yaml --transport tcp:4811
    rfq-node --transport stdio --log-level debug

The scenario file declares the channel (seed, noise model) and actor
devices; radios default to two sub-GHz frontends and one 2.4 GHz frontend.
RFQ_LOG overrides --log-level.
"""

import argparse
import logging
import os
import sys

from rfnode.assemble import DEFAULT_RADIOS, build_node
from rfnode.env.scenario import load_scenario
from rfnode.rpc.server import NodeServer


def parse_radios(text: str):
    out = []
    for part in text.split(","):
        radio_id, _, profile = part.partition("=")
        if not profile:
            raise argparse.ArgumentTypeError(
                f"bad radio spec {part!r}, expected id=profile")
        out.append((radio_id.strip(), profile.strip()))
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="rfq-node",
        description="Virtual multi-radio node over a simulated RF channel")
    parser.add_argument("--scenario", help="YAML scenario file")
    parser.add_argument("--transport", default="stdio",
                        help="stdio or tcp:<port> (0 picks a free port)")
    parser.add_argument("--radios", type=parse_radios,
                        default=list(DEFAULT_RADIOS),
                        help="comma list id=profile "
                             "(default radioA=vc1101,radioB=vc1101,radioC=vnrf24)")
    parser.add_argument("--modules", default=None,
                        help="comma list of module names to enable "
                             "(default: all built-ins)")
    parser.add_argument("--loop-step-us", type=int, default=100,
                        help="idle virtual-clock step per loop iteration")
    parser.add_argument("--log-level", default="warning")
    args = parser.parse_args(argv)

    level = os.environ.get("RFQ_LOG", args.log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        stream=sys.stderr,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")

    scenario = load_scenario(args.scenario) if args.scenario else None
    enable = None
    if args.modules is not None:
        enable = {m.strip() for m in args.modules.split(",") if m.strip()}
    node, _ = build_node(scenario, radios=args.radios, enable=enable,
                         loop_step_us=args.loop_step_us)
    server = NodeServer(node)

    if args.transport == "stdio":
        server.serve_stdio()
    elif args.transport.startswith("tcp:"):
        port = int(args.transport.split(":", 1)[1])
        try:
            server.serve_tcp(port)
        except KeyboardInterrupt:
            pass
    else:
        parser.error(f"unknown transport {args.transport!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
