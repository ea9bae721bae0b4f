"""rfnode: a virtual multi-radio sniffer/injector node.

The package simulates, on a deterministic virtual clock, what a small
multi-transceiver RF dongle firmware does: a channel model with actor
devices, per-radio frontends with register files and packet engines, a
module pipeline with filtering/rewriting/repeating, automatic carrier and
bitrate recovery, and a framed RPC served to a host shell over stdio or TCP.
"""

__version__ = "0.1.0"
