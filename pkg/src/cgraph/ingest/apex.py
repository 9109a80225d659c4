"""Registrable-domain (apex) derivation against a public-suffix snapshot.

The matching rules follow the publicsuffix.org algorithm: the longest
matching rule wins, ``*.`` wildcards match exactly one label, and ``!``
exception rules override wildcards. A name no rule covers falls back to
the implicit ``*`` rule, i.e. its apex is the last two labels.
"""

from __future__ import annotations

import importlib.resources
from functools import lru_cache
from pathlib import Path

from cgraph.errors import InvalidHostname
from cgraph.ingest.schema import canonical_hostname, is_valid_hostname

_EXCEPTION = object()
_TERMINAL = object()


class PublicSuffixList:
    """Suffix rules loaded into a label trie, matched right to left."""

    def __init__(self, rules):
        self._trie: dict = {}
        for rule in rules:
            rule = rule.strip()
            if not rule or rule.startswith("//"):
                continue
            exception = rule.startswith("!")
            labels = rule.lstrip("!").lower().split(".")
            node = self._trie
            for label in reversed(labels):
                node = node.setdefault(label, {})
            node[_EXCEPTION if exception else _TERMINAL] = True

    @classmethod
    def from_file(cls, path: str | Path) -> "PublicSuffixList":
        with open(path, encoding="utf-8") as fh:
            return cls(fh)

    def suffix_label_count(self, labels: list[str]) -> int:
        """Number of labels in the public suffix of a dotted name.

        ``labels`` is the name split on dots, leftmost label first.
        """
        best = 1  # implicit "*" rule
        exception_depth = None
        frontier = [self._trie]
        for depth, label in enumerate(reversed(labels), start=1):
            nxt = []
            for node in frontier:
                for key in (label, "*"):
                    child = node.get(key)
                    if child is None:
                        continue
                    if _EXCEPTION in child:
                        exception_depth = depth
                    if _TERMINAL in child:
                        best = max(best, depth)
                    nxt.append(child)
            if not nxt:
                break
            frontier = nxt
        if exception_depth is not None:
            return exception_depth - 1
        return best

    def apex_of(self, fqdn: str) -> str:
        """Return the registrable domain of ``fqdn``.

        A name that is itself a public suffix is returned unchanged, so
        the operation is idempotent.
        """
        name = canonical_hostname(fqdn)
        if not is_valid_hostname(name):
            raise InvalidHostname(f"not a valid hostname: {fqdn!r}")
        labels = name.split(".")
        suffix_len = self.suffix_label_count(labels)
        if suffix_len >= len(labels):
            return name
        return ".".join(labels[-(suffix_len + 1):])


@lru_cache(maxsize=1)
def bundled_psl() -> PublicSuffixList:
    """The snapshot shipped with the package."""
    ref = importlib.resources.files("cgraph.ingest") / "data" / "public_suffix_list.dat"
    return PublicSuffixList(ref.read_text(encoding="utf-8").splitlines())


def apex_of(fqdn: str, psl: PublicSuffixList | None = None) -> str:
    """Registrable domain of ``fqdn`` using ``psl`` or the bundled snapshot."""
    return (psl or bundled_psl()).apex_of(fqdn)
