"""Binary frame records: everything needed to rebuild a frame exactly, plus the seed that made it."""

from typing import Tuple, Union

import numpy as np

from chanest.frame import FlatFrame, FrameConfig, assemble_flat_frame
from cpsc.channel import CpscConfig, CpscFrame, FreqSelChannel, assemble_cpsc_frame

Frame = Union[FlatFrame, CpscFrame]


def save_frame(path: str, frame: Frame, seed: int) -> str:
    path = str(path) if str(path).endswith(".npz") else f"{path}.npz"
    try:
        if isinstance(frame, CpscFrame):
            cfg = frame.config
            np.savez(
                path, kind="cpsc", seed=seed, sigma2=frame.sigma2,
                dims=np.array([cfg.K, cfg.N, cfg.L, cfg.I, cfg.Q]), pdp=np.array(cfg.pdp),
                Es=cfg.Es, b=cfg.b, taps=frame.channel.taps, data=frame.data,
                pilot_noise=frame.pilot_noise, block_noise=frame.block_noise,
            )
        else:
            cfg = frame.config
            np.savez(
                path, kind="flat", seed=seed, sigma2=frame.sigma2,
                dims=np.array([cfg.K, cfg.N, cfg.Q]), Es=cfg.Es, p=cfg.p,
                H_c=frame.H_c, X_data=frame.X_data, noise=frame.noise,
            )
    except OSError as exc:
        raise OSError(f"cannot write frame record to {path}: {exc}") from exc
    return path


def load_frame(path: str) -> Tuple[Frame, int]:
    try:
        with np.load(path) as rec:
            kind = str(rec["kind"])
            seed = int(rec["seed"])
            sigma2 = float(rec["sigma2"])
            if kind == "cpsc":
                K, N, L, I, Q = (int(v) for v in rec["dims"])
                cfg = CpscConfig(K=K, N=N, L=L, I=I, Q=Q, pdp=tuple(float(v) for v in rec["pdp"]),
                                 Es=float(rec["Es"]), b=float(rec["b"]))
                frame = assemble_cpsc_frame(cfg, FreqSelChannel(taps=rec["taps"]), rec["data"],
                                            rec["pilot_noise"], rec["block_noise"], sigma2)
            else:
                K, N, Q = (int(v) for v in rec["dims"])
                cfg = FrameConfig(K=K, N=N, Q=Q, Es=float(rec["Es"]), p=float(rec["p"]))
                frame = assemble_flat_frame(cfg, rec["H_c"], rec["X_data"], rec["noise"], sigma2)
    except OSError as exc:
        raise OSError(f"cannot read frame record from {path}: {exc}") from exc
    return frame, seed
