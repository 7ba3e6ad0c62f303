"""Record service responses for the UI contract tests.

Starts a real ``scansim serve`` process, drives a few sessions over HTTP,
and saves the response bodies byte-for-byte.  The contract tests assert
that every statistic the UI displays is a verbatim slice of these bodies,
so regenerate them whenever the service's response format changes:

    python3 frontend/test/fixtures/record.py
"""

from __future__ import annotations

import json
import pathlib
import socket
import subprocess
import sys
import time
import urllib.request

HERE = pathlib.Path(__file__).resolve().parent


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def wait_healthy(base: str, deadline_s: float = 15.0) -> None:
    end = time.monotonic() + deadline_s
    while time.monotonic() < end:
        try:
            with urllib.request.urlopen(base + "/healthz", timeout=1) as response:
                if response.status == 200:
                    return
        except OSError:
            time.sleep(0.2)
    raise RuntimeError("the service did not come up in time")


def get(base: str, path: str) -> bytes:
    with urllib.request.urlopen(base + path) as response:
        return response.read()


def post(base: str, path: str, body: dict) -> bytes:
    request = urllib.request.Request(
        base + path,
        data=json.dumps(body).encode(),
        headers={"Content-Type": "application/json"},
    )
    with urllib.request.urlopen(request) as response:
        return response.read()


def save(name: str, payload: bytes) -> None:
    (HERE / name).write_bytes(payload)
    print(f"wrote {name} ({len(payload)} bytes)")


def main() -> int:
    port = free_port()
    base = f"http://127.0.0.1:{port}"
    server = subprocess.Popen(
        [sys.executable, "-m", "scansim.cli", "serve", "--port", str(port)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    try:
        wait_healthy(base)
        save("layouts.json", get(base, "/layouts"))

        # The canonical noiseless demo word: four midpoint clicks, nine scans.
        noiseless = {
            "layout": "grid2x2",
            "phrase": "a_",
            "seed": 7,
            "params": {"t_scan": 1.0, "sigma": 1e-9},
        }
        created = post(base, "/sessions", noiseless)
        save("session_created.json", created)
        sid = json.loads(created)["id"]
        save("click_accepted.json", post(base, f"/sessions/{sid}/click", {"t_ms": 1500}))
        for t_ms in (3500, 5500, 8500):
            post(base, f"/sessions/{sid}/click", {"t_ms": t_ms})
        save("stats_noiseless.json", get(base, f"/sessions/{sid}/stats"))
        save("log_noiseless.jsonl", get(base, f"/sessions/{sid}/log"))

        # A fresh session polled mid-pass, for the state-view fixture.
        other = json.loads(post(base, "/sessions", noiseless))
        save("state_mid.json", get(base, f"/sessions/{other['id']}/state?t_ms=1500"))

        # A seeded noisy session that finishes on false positives alone.
        noisy = {
            "layout": "grid2x2",
            "phrase": "a_",
            "seed": 11,
            "params": {"t_scan": 1.0, "lambda": 0.4},
        }
        nid = json.loads(post(base, "/sessions", noisy))["id"]
        get(base, f"/sessions/{nid}/state?t_ms=500000")
        save("stats_noisy.json", get(base, f"/sessions/{nid}/stats"))

        # Fast mode with false positives: sampling only, prediction marked
        # unavailable in the stats body.
        fast = {
            "layout": "grid2x2",
            "phrase": "a_",
            "seed": 3,
            "mode": "fast",
            "t_fast": 0.25,
            "engine": "montecarlo",
            "params": {"t_scan": 1.0, "lambda": 0.5},
        }
        fid = json.loads(post(base, "/sessions", fast))["id"]
        get(base, f"/sessions/{fid}/state?t_ms=500000")
        save("stats_unavailable.json", get(base, f"/sessions/{fid}/stats"))
    finally:
        server.terminate()
        server.wait(timeout=10)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
