"""Websocket service wrapping a session in a fixed-tick real-time loop.

One websocket connection owns one session.  Inbound messages are drained
between ticks; the latest held-velocity wins and bank requests latch
until the next tick, so simulated time advances exactly one tick per
wall-clock tick regardless of message timing.
"""

from __future__ import annotations

import asyncio
import json
import time
from dataclasses import asdict
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from ..env import ContinuousConfig, Drift, Fixed, RandomIsi
from .session import Session, SessionConfig


def _condition_from_dict(d):
    kind = d["kind"]
    if kind == "fixed":
        return Fixed(d["isi"])
    if kind == "random":
        return RandomIsi(d["lo"], d["hi"])
    if kind == "drift":
        return Drift(d["start"], d.get("delta", 1), d["min"], d["max"],
                     d.get("exclude_zero", False))
    raise ValueError(f"unknown hazard condition kind {kind!r}")


def session_config_from_dict(d: dict) -> SessionConfig:
    env_d = dict(d.get("env", {}))
    if "condition" in env_d and env_d["condition"] is not None:
        env_d["condition"] = _condition_from_dict(env_d["condition"])
    env = ContinuousConfig(**env_d)
    rest = {k: v for k, v in d.items() if k != "env"}
    return SessionConfig(env=env, **rest)


def write_trial_log(log_dir, session: Session):
    """Persist one trial as JSON lines: a metadata line, then records."""
    path = Path(log_dir)
    path.mkdir(parents=True, exist_ok=True)
    name = f"trial_{session.trial_id}_{int(time.time() * 1000)}.jsonl"
    out = path / name
    with out.open("w") as f:
        meta = {"trial_id": session.trial_id,
                "coagent": session.coagent_kind,
                "env": asdict(session.cfg.env)}
        f.write(json.dumps(meta, default=str) + "\n")
        for rec in session.records:
            f.write(json.dumps(rec) + "\n")
    return out


def create_app(config: SessionConfig | None = None,
               log_dir=None) -> FastAPI:
    base_cfg = config if config is not None else SessionConfig()
    app = FastAPI(title="frosthollow-live")

    @app.get("/health")
    def health():
        return {"status": "ok", "tick": base_cfg.env.tick}

    @app.websocket("/ws")
    async def ws(websocket: WebSocket):
        await websocket.accept()
        session = Session(base_cfg)
        tick = base_cfg.env.tick
        vx = 0.0
        bank = False
        loop = asyncio.get_event_loop()
        deadline = None
        try:
            while True:
                timeout = None if deadline is None \
                    else max(0.0, deadline - loop.time())
                try:
                    raw = await asyncio.wait_for(websocket.receive_text(),
                                                 timeout)
                    msg = json.loads(raw)
                    if msg.get("type") == "start_trial":
                        session.start_trial(int(msg["trial_id"]))
                        vx, bank = 0.0, False
                        deadline = loop.time() + tick
                    elif msg.get("type") == "input":
                        if not session.trial_active:
                            await websocket.send_text(json.dumps(
                                {"type": "notice",
                                 "message": "input ignored: no active trial"}))
                        else:
                            vx = float(msg.get("vx", 0.0))
                            bank = bank or bool(msg.get("bank", False))
                    continue
                except asyncio.TimeoutError:
                    pass
                # tick deadline reached
                out = session.tick(vx, bank)
                bank = False
                await websocket.send_text(json.dumps(out))
                if out["type"] == "trial_end":
                    if log_dir is not None:
                        write_trial_log(log_dir, session)
                    deadline = None
                    vx, bank = 0.0, False
                else:
                    deadline += tick
        except WebSocketDisconnect:
            pass

    return app


def serve(host="127.0.0.1", port=8765, config=None, log_dir="trial_logs"):
    import uvicorn

    uvicorn.run(create_app(config, log_dir), host=host, port=port)
