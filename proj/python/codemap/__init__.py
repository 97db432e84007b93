"""Python access to the codemap core: build, diff, render and query maps."""

import json

from . import _core
from ._core import FORMAT_VERSION, InvalidArgument

__all__ = ["FORMAT_VERSION", "InvalidArgument", "Map", "build", "diff", "render_svg", "render_png"]


def _text(model):
    return model if isinstance(model, str) else json.dumps(model)


def build(root, *, alpha=0.6, k=0, seed=0, resolution=512, prev=None, built_at=""):
    """Build a map of the source tree at `root`. Returns the model as a dict."""
    prev_text = None if prev is None else _text(prev)
    return json.loads(_core.build(str(root), alpha, k, seed, resolution, prev_text, built_at))


def diff(before, after):
    """Stability report between two models (dicts or JSON text)."""
    return json.loads(_core.diff(_text(before), _text(after)))


def render_svg(model, **opts):
    return _core.render_svg(_text(model), **opts)


def render_png(model, **opts):
    return _core.render_png(_text(model), **opts)


class Map:
    """The HTTP handlers of `codemap serve`, callable without a socket.

    Each method returns (status, parsed JSON body)."""

    def __init__(self, model, root):
        self._map = _core.Map(_text(model), str(root))

    @staticmethod
    def _unwrap(res):
        status, content_type, body = res
        if content_type.startswith("application/json"):
            return status, json.loads(body)
        return status, body

    def map(self):
        return self._unwrap(self._map.map())

    def search(self, q=None, mode=None):
        return self._unwrap(self._map.search(q, mode))

    def callers(self, symbol=None):
        return self._unwrap(self._map.callers(symbol))

    def file(self, path=None):
        return self._unwrap(self._map.file(path))

    def anchors(self, anchors):
        return self._unwrap(self._map.anchors(_text(anchors)))
