import logging
import os

from omegaconf import OmegaConf

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def setup_logging(verbose=False):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format=LOG_FORMAT,
        force=True,
    )


def resolve_output_path(out, fmt, stem):
    """A directory (existing, or spelled with a trailing separator) gets `<stem>.<fmt>`"""

    if out.endswith(os.sep) or os.path.isdir(out):
        os.makedirs(out, exist_ok=True)
        return os.path.join(out, f"{stem}.{fmt}")
    parent = os.path.dirname(out)
    if parent and not os.path.exists(parent):
        os.makedirs(parent)
    return out


def config_path_for(report_path):
    stem, _ = os.path.splitext(report_path)
    return f"{stem}.config.yaml"


def save_config(cfg, report_path):
    config_path = config_path_for(report_path)
    OmegaConf.save(config=cfg, f=config_path)
    return config_path
