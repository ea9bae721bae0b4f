import subprocess
import sys
import textwrap

from rfnode.rpc.framing import FrameDecoder, encode_frame


def test_node_cli_stdio_session(tmp_path):
    scenario = tmp_path / "quiet.yaml"
    scenario.write_text(textwrap.dedent("""\
        seed: 1
        noise_floor_dbm: -100.0
        rssi_noise_sigma_db: 0.0
        actors: []
    """))
    frames = (encode_frame("rfquack/in/node/get_schema", {})
              + encode_frame("rfquack/in/radioA/rx", {})
              + encode_frame("rfquack/in/radioA/status", {}))
    proc = subprocess.run(
        [sys.executable, "-m", "rfnode.cli", "--scenario", str(scenario),
         "--transport", "stdio", "--log-level", "error"],
        input=frames, stdout=subprocess.PIPE, stderr=subprocess.PIPE,
        timeout=60,
    )
    got = FrameDecoder().feed(proc.stdout)
    topics = [t for t, _ in got]
    assert "rfquack/out/node/schema" in topics
    status = [p for t, p in got if t == "rfquack/out/radioA/status"]
    assert status and status[0]["mode"] == "RX"


def test_node_cli_rejects_bad_radio_spec():
    proc = subprocess.run(
        [sys.executable, "-m", "rfnode.cli", "--radios", "oops"],
        capture_output=True, timeout=30,
    )
    assert proc.returncode != 0
