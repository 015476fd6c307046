"""Turtle reader and a canonical writer.

Supported subset: @prefix/@base (and their SPARQL-style spellings), IRIs,
prefixed names, blank node labels and ``[]`` property lists, string /
numeric / boolean literals, language tags, ``^^`` datatypes, predicate and
object lists, and the ``a`` keyword.  RDF collections ``( ... )`` are
rejected with a clear error.

Numeric shorthand literals are normalized to typed literals so that term
equality stays deterministic: ``42`` becomes ``"42"^^xsd:integer``, ``3.5``
becomes ``"3.5"^^xsd:decimal`` and exponent forms become ``xsd:double``.
"""

from __future__ import annotations

from urllib.parse import urljoin

from .graph import Graph
from .terms import (
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    Term,
    Triple,
    blank,
    iri,
    is_absolute_iri,
    literal,
)


class TurtleParseError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


class UndefinedPrefixError(TurtleParseError):
    pass


class InvalidIriError(TurtleParseError):
    pass


_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}

_PN_LOCAL_EXTRA = "_-."
_WS = " \t\r\n"


class _Scanner:
    """Character-level cursor with line/column tracking."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def error(self, message: str, cls=TurtleParseError):
        raise cls(message, self.line, self.col)

    def skip_ws_and_comments(self) -> None:
        while not self.eof():
            ch = self.peek()
            if ch in _WS:
                self.advance()
            elif ch == "#":
                while not self.eof() and self.peek() != "\n":
                    self.advance()
            else:
                return

    def match_keyword(self, word: str) -> bool:
        """Case-insensitive keyword match followed by a delimiter."""
        end = self.pos + len(word)
        if self.text[self.pos : end].lower() != word.lower():
            return False
        nxt = self.text[end : end + 1]
        if nxt and (nxt.isalnum() or nxt == "_"):
            return False
        for _ in word:
            self.advance()
        return True

    def read_iriref(self) -> str:
        # caller consumed nothing; current char must be '<'
        self.advance()
        out = []
        while True:
            if self.eof():
                self.error("unterminated IRI")
            ch = self.advance()
            if ch == ">":
                break
            if ch == "\\":
                out.append(self._read_uchar())
            elif ch in ' <"{}|^`\n':
                self.error(f"illegal character {ch!r} in IRI", InvalidIriError)
            else:
                out.append(ch)
        return "".join(out)

    def _read_uchar(self) -> str:
        if self.eof():
            self.error("unterminated escape")
        kind = self.advance()
        if kind == "u":
            width = 4
        elif kind == "U":
            width = 8
        else:
            self.error(f"invalid escape \\{kind} in IRI", InvalidIriError)
        hexits = ""
        for _ in range(width):
            if self.eof():
                self.error("unterminated \\u escape")
            hexits += self.advance()
        try:
            return chr(int(hexits, 16))
        except ValueError:
            self.error(f"invalid \\u escape {hexits!r}")

    def read_string(self) -> str:
        quote = self.advance()
        long = False
        if self.peek() == quote and self.peek(1) == quote:
            self.advance()
            self.advance()
            long = True
        out = []
        while True:
            if self.eof():
                self.error("unterminated string literal")
            ch = self.advance()
            if ch == quote:
                if not long:
                    break
                if self.peek() == quote and self.peek(1) == quote:
                    self.advance()
                    self.advance()
                    break
                out.append(ch)
                continue
            if ch == "\\":
                if self.eof():
                    self.error("unterminated escape")
                esc = self.advance()
                if esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                elif esc == "u" or esc == "U":
                    width = 4 if esc == "u" else 8
                    hexits = ""
                    for _ in range(width):
                        if self.eof():
                            self.error("unterminated \\u escape")
                        hexits += self.advance()
                    try:
                        out.append(chr(int(hexits, 16)))
                    except ValueError:
                        self.error(f"invalid \\u escape {hexits!r}")
                else:
                    self.error(f"invalid string escape \\{esc}")
            elif ch == "\n" and not long:
                self.error("newline in single-line string")
            else:
                out.append(ch)
        return "".join(out)

    def read_pname(self) -> tuple[str, str]:
        """Read prefix:local.  Returns (prefix, local)."""
        prefix = []
        while not self.eof() and (self.peek().isalnum() or self.peek() in "_-."):
            prefix.append(self.advance())
        if self.peek() != ":":
            self.error("expected ':' in prefixed name")
        self.advance()
        local = []
        while not self.eof():
            ch = self.peek()
            if ch.isalnum() or ch in _PN_LOCAL_EXTRA:
                local.append(self.advance())
            elif ch == "%" and self.peek(1) and self.peek(2):
                local.append(self.advance())
                local.append(self.advance())
                local.append(self.advance())
            elif ch == "\\" and self.peek(1):
                self.advance()
                local.append(self.advance())
            else:
                break
        # a trailing dot belongs to the statement, not the name
        while local and local[-1] == ".":
            local.pop()
            self.pos -= 1
            self.col -= 1
        return "".join(prefix), "".join(local)

    def read_number(self) -> Term:
        start = self.pos
        if self.peek() and self.peek() in "+-":
            self.advance()
        seen_digit = seen_dot = seen_exp = False
        while not self.eof():
            ch = self.peek()
            if ch.isdigit():
                seen_digit = True
                self.advance()
            elif ch == "." and not seen_dot and not seen_exp and self.peek(1).isdigit():
                seen_dot = True
                self.advance()
            elif ch in "eE" and seen_digit and not seen_exp:
                seen_exp = True
                self.advance()
                if self.peek() in "+-":
                    self.advance()
            else:
                break
        lex = self.text[start : self.pos]
        if not seen_digit:
            self.error(f"malformed numeric literal {lex!r}")
        if seen_exp:
            return literal(lex, XSD_DOUBLE)
        if seen_dot:
            return literal(lex, XSD_DECIMAL)
        return literal(lex, XSD_INTEGER)


class _TurtleParser:
    def __init__(self, text: str, base: str | None):
        self.sc = _Scanner(text)
        self.base = base
        self.graph = Graph()
        self.prefixes: dict[str, str] = {}
        self._anon = 0

    def parse(self) -> Graph:
        sc = self.sc
        while True:
            sc.skip_ws_and_comments()
            if sc.eof():
                break
            if sc.peek() == "@":
                self._directive_at()
            elif sc.match_keyword("PREFIX"):
                self._prefix_decl(require_dot=False)
            elif sc.match_keyword("BASE"):
                self._base_decl(require_dot=False)
            else:
                self._triples_statement()
        self.graph.prefixes = dict(self.prefixes)
        return self.graph

    # --- directives ----------------------------------------------------

    def _directive_at(self) -> None:
        sc = self.sc
        sc.advance()  # '@'
        if sc.match_keyword("prefix"):
            self._prefix_decl(require_dot=True)
        elif sc.match_keyword("base"):
            self._base_decl(require_dot=True)
        else:
            sc.error("unknown @ directive")

    def _prefix_decl(self, require_dot: bool) -> None:
        sc = self.sc
        sc.skip_ws_and_comments()
        prefix, local = sc.read_pname()
        if local:
            sc.error("prefix declaration must end with ':'")
        sc.skip_ws_and_comments()
        if sc.peek() != "<":
            sc.error("expected IRI in prefix declaration")
        target = self._resolve(sc.read_iriref())
        self.prefixes[prefix] = target
        if require_dot:
            self._expect_dot()

    def _base_decl(self, require_dot: bool) -> None:
        sc = self.sc
        sc.skip_ws_and_comments()
        if sc.peek() != "<":
            sc.error("expected IRI in base declaration")
        self.base = self._resolve(sc.read_iriref())
        if require_dot:
            self._expect_dot()

    def _expect_dot(self) -> None:
        self.sc.skip_ws_and_comments()
        if self.sc.peek() != ".":
            self.sc.error("expected '.'")
        self.sc.advance()

    def _resolve(self, ref: str) -> str:
        if is_absolute_iri(ref):
            return ref
        if self.base is None:
            self.sc.error(f"relative IRI {ref!r} without a base", InvalidIriError)
        return urljoin(self.base, ref)

    # --- triples -------------------------------------------------------

    def _triples_statement(self) -> None:
        sc = self.sc
        subject = self._subject()
        sc.skip_ws_and_comments()
        # a bare [ ... ] with predicate-object list may stand alone
        if sc.peek() == ".":
            sc.advance()
            return
        self._predicate_object_list(subject)
        self._expect_dot()

    def _subject(self) -> Term:
        sc = self.sc
        sc.skip_ws_and_comments()
        ch = sc.peek()
        if ch == "<":
            return iri(self._resolve(sc.read_iriref()))
        if ch == "(":
            sc.error("RDF collections '( ... )' are not supported")
        if ch == "[":
            return self._blank_property_list()
        if ch == "_" and sc.peek(1) == ":":
            sc.advance()
            sc.advance()
            _, label = self._blank_label()
            return blank(label)
        if ch and (ch.isalnum() or ch in "_-.:"):
            return self._pname_term()
        sc.error(f"unexpected character {ch!r} at start of statement")

    def _blank_label(self) -> tuple[str, str]:
        sc = self.sc
        label = []
        while not sc.eof() and (sc.peek().isalnum() or sc.peek() in "_-."):
            label.append(sc.advance())
        while label and label[-1] == ".":
            label.pop()
            sc.pos -= 1
            sc.col -= 1
        if not label:
            sc.error("empty blank node label")
        return "_:", "".join(label)

    def _pname_term(self) -> Term:
        sc = self.sc
        prefix, local = sc.read_pname()
        if prefix not in self.prefixes:
            sc.error(f"undefined prefix {prefix + ':'!r}", UndefinedPrefixError)
        return iri(self.prefixes[prefix] + local)

    def _blank_property_list(self) -> Term:
        sc = self.sc
        sc.advance()  # '['
        node = blank(f"anon{self._anon}")
        self._anon += 1
        sc.skip_ws_and_comments()
        if sc.peek() == "]":
            sc.advance()
            return node
        self._predicate_object_list(node)
        sc.skip_ws_and_comments()
        if sc.peek() != "]":
            sc.error("expected ']'")
        sc.advance()
        return node

    def _predicate_object_list(self, subject: Term) -> None:
        sc = self.sc
        while True:
            sc.skip_ws_and_comments()
            predicate = self._verb()
            self._object_list(subject, predicate)
            sc.skip_ws_and_comments()
            if sc.peek() == ";":
                sc.advance()
                sc.skip_ws_and_comments()
                # tolerate trailing ';' before '.' or ']'
                if sc.peek() and sc.peek() in ".]":
                    return
                continue
            return

    def _verb(self) -> Term:
        sc = self.sc
        ch = sc.peek()
        if ch == "a" and not (sc.peek(1).isalnum() or sc.peek(1) in "_-.:"):
            sc.advance()
            return iri(RDF_TYPE)
        if ch == "<":
            return iri(self._resolve(sc.read_iriref()))
        if ch and (ch.isalnum() or ch in "_-.:"):
            return self._pname_term()
        sc.error(f"expected predicate, found {ch!r}")

    def _object_list(self, subject: Term, predicate: Term) -> None:
        sc = self.sc
        while True:
            obj = self._object()
            self.graph.add(Triple(subject, predicate, obj))
            sc.skip_ws_and_comments()
            if sc.peek() == ",":
                sc.advance()
                continue
            return

    def _object(self) -> Term:
        sc = self.sc
        sc.skip_ws_and_comments()
        ch = sc.peek()
        if ch == "<":
            return iri(self._resolve(sc.read_iriref()))
        if ch == "(":
            sc.error("RDF collections '( ... )' are not supported")
        if ch == "[":
            return self._blank_property_list()
        if ch and ch in "\"'":
            return self._rdf_literal()
        if ch == "_" and sc.peek(1) == ":":
            sc.advance()
            sc.advance()
            _, label = self._blank_label()
            return blank(label)
        if ch.isdigit() or (ch and ch in "+-" and (sc.peek(1).isdigit() or sc.peek(1) == ".")):
            return sc.read_number()
        if ch == "." and sc.peek(1).isdigit():
            return sc.read_number()
        if sc.match_keyword("true"):
            return literal("true", XSD_BOOLEAN)
        if sc.match_keyword("false"):
            return literal("false", XSD_BOOLEAN)
        if ch and (ch.isalnum() or ch in "_-.:"):
            return self._pname_term()
        sc.error(f"expected object, found {ch!r}")

    def _rdf_literal(self) -> Term:
        sc = self.sc
        lexical = sc.read_string()
        if sc.peek() == "@":
            sc.advance()
            tag = []
            while not sc.eof() and (sc.peek().isalnum() or sc.peek() == "-"):
                tag.append(sc.advance())
            if not tag:
                sc.error("empty language tag")
            return literal(lexical, lang="".join(tag))
        if sc.peek() == "^" and sc.peek(1) == "^":
            sc.advance()
            sc.advance()
            sc.skip_ws_and_comments()
            if sc.peek() == "<":
                dt = self._resolve(sc.read_iriref())
            else:
                dt_term = self._pname_term()
                dt = dt_term.value
            return literal(lexical, datatype=dt)
        return literal(lexical)


def parse_turtle(text: str, base: str | None = None) -> Graph:
    """Parse a Turtle document into a Graph.

    The graph's ``prefixes`` attribute carries every @prefix declaration.
    Raises TurtleParseError (with line/column) on malformed input,
    UndefinedPrefixError for unbound prefixes, InvalidIriError for bad IRIs.
    """
    return _TurtleParser(text, base).parse()


def serialize_graph(graph: Graph) -> str:
    """Canonical text for a graph: prefix declarations, then one triple per
    line in full IRI form, canonically ordered."""
    lines = []
    for prefix in sorted(graph.prefixes):
        lines.append(f"@prefix {prefix}: <{graph.prefixes[prefix]}> .")
    if lines:
        lines.append("")
    for t in graph.triples():
        lines.append(t.n3())
    return "\n".join(lines) + "\n"


def _relabel(term: Term, doc_tag: str) -> Term:
    if term.is_blank:
        return blank(f"{doc_tag}_{term.value}")
    return term


def load_graph(paths, base: str | None = None) -> Graph:
    """Load one or more Turtle files (or a directory of them) into a single
    merged graph.

    Blank node labels are scoped per document: each document's labels get a
    document-unique prefix so merged files cannot collide.  Later prefix
    declarations win on conflict, matching sequential parsing.
    """
    from pathlib import Path

    if isinstance(paths, (str, Path)):
        paths = [paths]
    files: list[Path] = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(p.glob("*.ttl")))
        else:
            files.append(p)
    merged = Graph()
    for index, path in enumerate(files):
        doc = parse_turtle(Path(path).read_text(encoding="utf-8"), base=base)
        tag = f"d{index}"
        for t in doc.triples():
            merged.add(Triple(_relabel(t.s, tag), t.p, _relabel(t.o, tag)))
        merged.prefixes.update(doc.prefixes)
    return merged
