import os
import logging

import yaml

base_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
default_config_path = f"{base_dir}/config/ggbm_config.yaml"

LOG_FORMAT = "%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s"


def mkdir(path):
    if path and not os.path.exists(path):
        os.makedirs(path)
    return path


def load_config(path=None, overrides=()):
    """Load the YAML config and apply ``section.key=value`` overrides.

    :param path: yaml file, default ``config/ggbm_config.yaml``
    :param overrides: iterable of ``"a.b.c=value"`` strings; values are parsed as YAML
    :return: nested dict
    """
    with open(path or default_config_path) as f:
        config = yaml.load(f, Loader=yaml.Loader)
    for item in overrides:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ValueError(f"override must look like section.key=value, got {item!r}")
        node = config
        *parents, leaf = key.strip().split(".")
        for name in parents:
            node = node.setdefault(name, {})
        node[leaf] = yaml.load(raw, Loader=yaml.Loader)
    return config


def get_logger(name="ggbm", verbose=1, log_file=None):
    """Attach stream (and file) handlers to the root logger and return the logger ``name``.

    Package modules log through ``logging.getLogger(__name__)`` and reach the
    same handlers by propagation.
    """
    root = logging.getLogger()
    root.setLevel(logging.DEBUG)
    for handler in list(root.handlers):
        if getattr(handler, "_ggbm", False):
            root.removeHandler(handler)
            handler.close()
    if verbose > 1:
        level = logging.DEBUG
    elif verbose > 0:
        level = logging.INFO
    else:
        level = logging.WARN
    formatter = logging.Formatter(LOG_FORMAT)
    handlers = [logging.StreamHandler()]
    if log_file:
        mkdir(os.path.dirname(log_file))
        handlers.append(logging.FileHandler(filename=log_file))
    for handler in handlers:
        handler.setFormatter(formatter)
        handler.setLevel(level)
        handler._ggbm = True
        root.addHandler(handler)
    return logging.getLogger(name)


def worker_count(requested=None):
    """Number of simulation workers, capped by ``GGBM_THREADS``."""
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("GGBM_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def simple_table(item_tuples):
    """Render ``(heading, cell)`` pairs as a one-row bordered table."""
    headings, cells = [], []
    for heading, cell in item_tuples:
        heading, cell = str(heading), str(cell)
        pad = abs(len(heading) - len(cell))
        pad_left, pad_right = ' ' * (pad // 2), ' ' * (pad - pad // 2)
        if len(heading) < len(cell):
            heading = pad_left + heading + pad_right
        else:
            cell = pad_left + cell + pad_right
        headings.append(heading)
        cells.append(cell)

    border, head, body = '', '', ''
    for heading, cell in zip(headings, cells):
        temp_head = f'| {heading} '
        border += '+' + '-' * (len(temp_head) - 1)
        head += temp_head
        body += f'| {cell} '
    border += '+'
    head += '|'
    body += '|'
    return '\n'.join([border, head, border, body, border])
