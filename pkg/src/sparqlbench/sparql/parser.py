"""Tokenizer and recursive-descent parser for the SPARQL subset.

Three failure modes, kept strictly apart: ParseError for text that is not
SPARQL, UnsupportedFeature for recognized SPARQL beyond the subset (UNION,
property paths, subqueries, aggregates other than COUNT, ...), and
UnknownPrefix for undeclared prefixed names.  Keywords are case-insensitive;
variable names are case-sensitive; both ``?`` and ``$`` sigils work.  A
missing dot before ``}`` is tolerated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urljoin

from ..rdf.terms import (
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DECIMAL,
    XSD_DOUBLE,
    XSD_INTEGER,
    Term,
    iri as make_iri,
    is_absolute_iri,
    literal as make_literal,
)
from .ast import (
    STAR,
    Comparison,
    Constant,
    CountAggregate,
    Expression,
    Filter,
    FunctionCall,
    Logical,
    Not,
    OptionalGroup,
    OrderKey,
    Query,
    TriplePattern,
    Var,
    pattern_variables,
)
from .errors import ParseError, ProjectionUnbound, UnknownPrefix, UnsupportedFeature

MAX_DEPTH = 120

SUPPORTED_FUNCTIONS = {"BOUND", "STR", "LANG", "DATATYPE", "REGEX", "CONTAINS", "STRSTARTS"}
_FUNCTION_ARITY = {
    "BOUND": (1, 1),
    "STR": (1, 1),
    "LANG": (1, 1),
    "DATATYPE": (1, 1),
    "REGEX": (2, 3),
    "CONTAINS": (2, 2),
    "STRSTARTS": (2, 2),
}

# Recognized SPARQL 1.1 we deliberately do not evaluate.  Meeting one of
# these yields UnsupportedFeature, never ParseError.
UNSUPPORTED_QUERY_FORMS = {"CONSTRUCT", "DESCRIBE", "INSERT", "DELETE", "LOAD", "CLEAR", "CREATE", "DROP", "COPY", "MOVE", "ADD", "WITH"}
UNSUPPORTED_PATTERN_KEYWORDS = {"UNION", "MINUS", "BIND", "VALUES", "SERVICE", "GRAPH"}
UNSUPPORTED_AGGREGATES = {"SUM", "AVG", "MIN", "MAX", "SAMPLE", "GROUP_CONCAT"}
UNSUPPORTED_FUNCTIONS = {
    "STRLEN", "SUBSTR", "UCASE", "LCASE", "STRENDS", "STRBEFORE", "STRAFTER",
    "ENCODE_FOR_URI", "CONCAT", "LANGMATCHES", "REPLACE", "ABS", "ROUND",
    "CEIL", "FLOOR", "RAND", "NOW", "YEAR", "MONTH", "DAY", "HOURS",
    "MINUTES", "SECONDS", "TIMEZONE", "TZ", "MD5", "SHA1", "SHA256",
    "SHA384", "SHA512", "COALESCE", "IF", "STRLANG", "STRDT", "SAMETERM",
    "ISIRI", "ISURI", "ISBLANK", "ISLITERAL", "ISNUMERIC", "IRI", "URI",
    "BNODE", "UUID", "STRUUID", "EXISTS",
}
_KEYWORDS = (
    {"SELECT", "ASK", "WHERE", "FILTER", "OPTIONAL", "DISTINCT", "REDUCED",
     "COUNT", "AS", "GROUP", "ORDER", "BY", "LIMIT", "OFFSET", "PREFIX",
     "BASE", "ASC", "DESC", "HAVING", "FROM", "NAMED", "NOT", "IN"}
    | UNSUPPORTED_QUERY_FORMS
    | UNSUPPORTED_PATTERN_KEYWORDS
    | UNSUPPORTED_AGGREGATES
    | SUPPORTED_FUNCTIONS
    | UNSUPPORTED_FUNCTIONS
)

_IRIREF_RE = re.compile(r'<([^<>"{}|^`\\\x00-\x20]*)>')
_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


@dataclass(frozen=True, slots=True)
class _Token:
    type: str  # kw word a var iri pname string langtag number boolean blank punct eof
    value: object
    line: int
    col: int


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str):
        raise ParseError(message, self.line, self.col)

    def _advance(self, n: int = 1) -> str:
        chunk = self.text[self.pos : self.pos + n]
        for ch in chunk:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n
        return chunk

    def _peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        while True:
            tok = self._next_token()
            out.append(tok)
            if tok.type == "eof":
                return out

    def _next_token(self) -> _Token:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
            else:
                break
        line, col = self.line, self.col
        if self.pos >= len(text):
            return _Token("eof", None, line, col)
        ch = text[self.pos]

        if ch == "<":
            m = _IRIREF_RE.match(text, self.pos)
            if m:
                self._advance(m.end() - self.pos)
                return _Token("iri", m.group(1), line, col)
            if self._peek(1) == "=":
                self._advance(2)
                return _Token("punct", "<=", line, col)
            self._advance()
            return _Token("punct", "<", line, col)

        if ch in "?$":
            if self._peek(1).isalnum() or self._peek(1) == "_":
                self._advance()
                name = self._read_while(lambda c: c.isalnum() or c == "_")
                return _Token("var", name, line, col)
            self._advance()
            return _Token("punct", "?", line, col)

        if ch in "\"'":
            value = self._read_string()
            return _Token("string", value, line, col)

        if ch == "@":
            self._advance()
            tag = self._read_while(lambda c: c.isalnum() or c == "-")
            if not tag:
                self.error("empty language tag")
            return _Token("langtag", tag, line, col)

        if ch.isdigit() or (ch in "+-" and (self._peek(1).isdigit() or (self._peek(1) == "." and self._peek(2).isdigit()))) or (
            ch == "." and self._peek(1).isdigit()
        ):
            return _Token("number", self._read_number(), line, col)

        if ch == "_" and self._peek(1) == ":":
            self._advance(2)
            label = self._read_while(lambda c: c.isalnum() or c in "_-")
            if not label:
                self.error("empty blank node label")
            return _Token("blank", label, line, col)

        if ch == ":" or ch.isalpha() or ch == "_":
            return self._read_word_or_pname(line, col)

        for two in ("^^", "&&", "||", "!=", ">=", "<="):
            if text.startswith(two, self.pos):
                self._advance(2)
                return _Token("punct", two, line, col)
        if ch in "{}().;,*=<>!|^/+-[]":
            self._advance()
            return _Token("punct", ch, line, col)
        self.error(f"unexpected character {ch!r}")

    def _read_while(self, pred) -> str:
        start = self.pos
        while self.pos < len(self.text) and pred(self.text[self.pos]):
            self._advance()
        return self.text[start : self.pos]

    def _read_word_or_pname(self, line: int, col: int) -> _Token:
        prefix = self._read_while(lambda c: c.isalnum() or c in "_-.")
        while prefix.endswith("."):
            prefix = prefix[:-1]
            self.pos -= 1
            self.col -= 1
        if self._peek() == ":":
            self._advance()
            local_chars: list[str] = []
            while self.pos < len(self.text):
                c = self.text[self.pos]
                if c.isalnum() or c in "_-.":
                    local_chars.append(self._advance())
                elif c == "%" and self._peek(1) and self._peek(2):
                    local_chars.extend((self._advance(), self._advance(), self._advance()))
                elif c == "\\" and self._peek(1):
                    self._advance()
                    local_chars.append(self._advance())
                else:
                    break
            local = "".join(local_chars)
            while local.endswith("."):
                local = local[:-1]
                self.pos -= 1
                self.col -= 1
            return _Token("pname", (prefix, local), line, col)
        if not prefix:
            self.error("unexpected ':'")
        upper = prefix.upper()
        if prefix == "a":
            return _Token("a", "a", line, col)
        if upper in ("TRUE", "FALSE"):
            return _Token("boolean", make_literal(upper.lower(), XSD_BOOLEAN), line, col)
        if upper in _KEYWORDS:
            return _Token("kw", upper, line, col)
        return _Token("word", prefix, line, col)

    def _read_number(self) -> Term:
        start = self.pos
        if self._peek() in "+-":
            self._advance()
        seen_dot = seen_exp = False
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c.isdigit():
                self._advance()
            elif c == "." and not seen_dot and not seen_exp and self._peek(1).isdigit():
                seen_dot = True
                self._advance()
            elif c in "eE" and not seen_exp and self._peek(1) and (self._peek(1).isdigit() or (self._peek(1) in "+-" and self._peek(2).isdigit())):
                seen_exp = True
                self._advance()
                if self._peek() in "+-":
                    self._advance()
            else:
                break
        lex = self.text[start : self.pos]
        if seen_exp:
            return make_literal(lex, XSD_DOUBLE)
        if seen_dot:
            return make_literal(lex, XSD_DECIMAL)
        return make_literal(lex, XSD_INTEGER)

    def _read_string(self) -> str:
        quote = self.text[self.pos]
        self._advance()
        long = False
        if self._peek() == quote and self._peek(1) == quote:
            self._advance(2)
            long = True
        out: list[str] = []
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated string literal")
            ch = self._advance()
            if ch == quote:
                if not long:
                    return "".join(out)
                if self._peek() == quote and self._peek(1) == quote:
                    self._advance(2)
                    return "".join(out)
                out.append(ch)
            elif ch == "\\":
                if self.pos >= len(self.text):
                    self.error("unterminated escape")
                esc = self._advance()
                if esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                elif esc in "uU":
                    width = 4 if esc == "u" else 8
                    hexits = self._advance(width)
                    try:
                        out.append(chr(int(hexits, 16)))
                    except ValueError:
                        self.error(f"invalid \\{esc} escape")
                else:
                    self.error(f"invalid string escape \\{esc}")
            elif ch == "\n" and not long:
                self.error("newline in string literal")
            else:
                out.append(ch)


class _Parser:
    def __init__(self, tokens: list[_Token], ambient_prefixes: dict[str, str], strict_projection: bool):
        self.toks = tokens
        self.idx = 0
        self.prefixes: dict[str, str] = {}
        self.ambient = ambient_prefixes
        self.base: str | None = None
        self.strict_projection = strict_projection
        self._anon = 0
        self._auto_alias = 0

    # --- token helpers ---------------------------------------------------

    def peek(self, ahead: int = 0) -> _Token:
        i = min(self.idx + ahead, len(self.toks) - 1)
        return self.toks[i]

    def next(self) -> _Token:
        tok = self.toks[self.idx]
        if tok.type != "eof":
            self.idx += 1
        return tok

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def at_punct(self, value: str) -> bool:
        t = self.peek()
        return t.type == "punct" and t.value == value

    def at_kw(self, *kws: str) -> bool:
        t = self.peek()
        return t.type == "kw" and t.value in kws

    def expect_punct(self, value: str) -> _Token:
        if not self.at_punct(value):
            self.error(f"expected {value!r}")
        return self.next()

    def expect_kw(self, kw: str) -> _Token:
        if not self.at_kw(kw):
            self.error(f"expected {kw}")
        return self.next()

    # --- prologue --------------------------------------------------------

    def parse_prologue(self) -> None:
        while self.at_kw("PREFIX", "BASE"):
            which = self.next().value
            if which == "PREFIX":
                t = self.next()
                if t.type != "pname" or t.value[1] != "":
                    self.error("expected 'prefix:' in PREFIX declaration", t)
                target = self.next()
                if target.type != "iri":
                    self.error("expected IRI in PREFIX declaration", target)
                self.prefixes[t.value[0]] = self.resolve_iri(target.value, target)
            else:
                target = self.next()
                if target.type != "iri":
                    self.error("expected IRI in BASE declaration", target)
                self.base = self.resolve_iri(target.value, target)

    def resolve_iri(self, ref: str, tok: _Token) -> str:
        if is_absolute_iri(ref):
            return ref
        if self.base is None:
            self.error(f"relative IRI {ref!r} without BASE", tok)
        return urljoin(self.base, ref)

    def resolve_pname(self, prefix: str, local: str, tok: _Token) -> str:
        if prefix in self.prefixes:
            return self.prefixes[prefix] + local
        if prefix in self.ambient:
            return self.ambient[prefix] + local
        raise UnknownPrefix(prefix + ":")

    # --- query -----------------------------------------------------------

    def parse_query(self) -> Query:
        self.parse_prologue()
        tok = self.peek()
        if tok.type == "kw" and tok.value in UNSUPPORTED_QUERY_FORMS:
            raise UnsupportedFeature(f"{tok.value} query form")
        if self.at_kw("ASK"):
            self.next()
            query = Query(form="ask", prefixes=dict(self.prefixes))
            query.where = self.parse_where()
            self.parse_modifiers(query)
            self.expect_eof()
            return query
        if not self.at_kw("SELECT"):
            self.error("expected SELECT or ASK")
        self.next()
        query = Query(form="select", prefixes=dict(self.prefixes))
        if self.at_kw("REDUCED"):
            raise UnsupportedFeature("REDUCED")
        if self.at_kw("DISTINCT"):
            self.next()
            query.distinct = True
        query.projection = self.parse_projection()
        if self.at_kw("FROM"):
            raise UnsupportedFeature("FROM dataset clause")
        query.where = self.parse_where()
        self.parse_modifiers(query)
        self.expect_eof()
        self.check_projection(query)
        return query

    def expect_eof(self) -> None:
        tok = self.peek()
        if tok.type == "kw" and tok.value in UNSUPPORTED_PATTERN_KEYWORDS | {"HAVING"}:
            raise UnsupportedFeature(tok.value)
        if tok.type != "eof":
            self.error("unexpected trailing content")

    def parse_projection(self):
        if self.at_punct("*"):
            self.next()
            return STAR
        items: list = []
        aliases: set[str] = set()
        while True:
            tok = self.peek()
            if tok.type == "var":
                self.next()
                items.append(Var(tok.value))
            elif tok.type == "punct" and tok.value == "(":
                self.next()
                items.append(self.parse_aggregate(expect_alias=True))
            elif tok.type == "kw" and tok.value == "COUNT":
                # tolerated shorthand: SELECT COUNT(?x) without an alias
                items.append(self.parse_aggregate(expect_alias=False))
            elif tok.type == "kw" and tok.value in UNSUPPORTED_AGGREGATES:
                raise UnsupportedFeature(f"aggregate {tok.value}")
            else:
                break
        if not items:
            self.error("empty SELECT projection")
        for item in items:
            name = item.name if isinstance(item, Var) else item.alias.name
            if name in aliases:
                self.error(f"duplicate projection of ?{name}")
            aliases.add(name)
        return tuple(items)

    def parse_aggregate(self, expect_alias: bool) -> CountAggregate:
        tok = self.peek()
        if tok.type == "kw" and tok.value in UNSUPPORTED_AGGREGATES:
            raise UnsupportedFeature(f"aggregate {tok.value}")
        if not self.at_kw("COUNT"):
            raise UnsupportedFeature("expression in projection")
        self.next()
        self.expect_punct("(")
        if self.at_kw("DISTINCT"):
            raise UnsupportedFeature("COUNT DISTINCT")
        if self.at_punct("*"):
            self.next()
            argument = None
        else:
            v = self.next()
            if v.type != "var":
                self.error("COUNT takes a variable or *", v)
            argument = Var(v.value)
        self.expect_punct(")")
        if expect_alias:
            self.expect_kw("AS")
            v = self.next()
            if v.type != "var":
                self.error("expected variable after AS", v)
            alias = Var(v.value)
            self.expect_punct(")")
        else:
            alias = Var(f".agg{self._auto_alias}")
            self._auto_alias += 1
        return CountAggregate(argument, alias)

    def parse_where(self) -> tuple:
        if self.at_kw("WHERE"):
            self.next()
        self.expect_punct("{")
        return self.parse_group(1)

    def parse_group(self, depth: int) -> tuple:
        if depth > MAX_DEPTH:
            self.error("group patterns nested too deeply")
        elements: list = []
        while True:
            tok = self.peek()
            if tok.type == "punct" and tok.value == "}":
                self.next()
                return tuple(elements)
            if tok.type == "eof":
                self.error("unterminated group pattern: expected '}'")
            if tok.type == "kw":
                if tok.value == "FILTER":
                    self.next()
                    elements.append(Filter(self.parse_constraint(depth)))
                    continue
                if tok.value == "OPTIONAL":
                    self.next()
                    self.expect_punct("{")
                    elements.append(OptionalGroup(self.parse_group(depth + 1)))
                    continue
                if tok.value in UNSUPPORTED_PATTERN_KEYWORDS:
                    raise UnsupportedFeature(tok.value)
                if tok.value == "SELECT":
                    raise UnsupportedFeature("subquery")
                if tok.value == "NOT":
                    raise UnsupportedFeature("NOT EXISTS")
            if tok.type == "punct" and tok.value == "{":
                raise UnsupportedFeature("nested group pattern")
            if tok.type == "punct" and tok.value == ".":
                self.next()
                continue
            self.parse_triples_block(elements, depth)

    def parse_triples_block(self, elements: list, depth: int) -> None:
        subject = self.parse_term(position="subject")
        while True:
            predicate = self.parse_verb()
            while True:
                obj = self.parse_term(position="object")
                elements.append(TriplePattern(subject, predicate, obj))
                if self.at_punct(","):
                    self.next()
                    continue
                break
            if self.at_punct(";"):
                self.next()
                # tolerate dangling ';' before '.' or '}'
                if self.at_punct(".") or self.at_punct("}"):
                    break
                continue
            break
        if self.at_punct("."):
            self.next()
        elif not (self.at_punct("}") or self.at_kw("FILTER", "OPTIONAL") or self.peek().type == "eof"
                  or (self.peek().type == "kw" and self.peek().value in UNSUPPORTED_PATTERN_KEYWORDS)):
            self.error("expected '.', '}', FILTER or OPTIONAL after triple pattern")

    def parse_verb(self):
        tok = self.peek()
        if tok.type == "punct" and tok.value == "^":
            raise UnsupportedFeature("property path (inverse)")
        if tok.type == "punct" and tok.value == "!":
            raise UnsupportedFeature("property path (negation)")
        if tok.type == "punct" and tok.value == "(":
            raise UnsupportedFeature("property path (group)")
        verb = self.parse_term(position="predicate")
        nxt = self.peek()
        if nxt.type == "punct" and nxt.value in ("/", "|", "^", "+", "*", "?"):
            raise UnsupportedFeature("property path")
        return verb

    def parse_term(self, position: str):
        tok = self.next()
        if tok.type == "var":
            return Var(tok.value)
        if tok.type == "iri":
            return make_iri(self.resolve_iri(tok.value, tok))
        if tok.type == "pname":
            return make_iri(self.resolve_pname(tok.value[0], tok.value[1], tok))
        if tok.type == "a":
            if position != "predicate":
                self.error("'a' is only valid as a predicate", tok)
            return make_iri(RDF_TYPE)
        if position == "predicate":
            self.error("expected an IRI or variable as predicate", tok)
        if tok.type == "blank":
            return Var("." + tok.value)
        if tok.type == "punct" and tok.value == "[":
            if self.at_punct("]"):
                self.next()
                v = Var(f".anon{self._anon}")
                self._anon += 1
                return v
            raise UnsupportedFeature("blank node property list")
        if tok.type == "punct" and tok.value == "(":
            raise UnsupportedFeature("RDF collection")
        if position == "subject":
            if tok.type in ("string", "number", "boolean"):
                self.error("a literal cannot be the subject of a pattern", tok)
            self.error("expected subject term", tok)
        if tok.type == "string":
            return self.finish_literal(tok)
        if tok.type == "number" or tok.type == "boolean":
            return tok.value
        self.error("expected object term", tok)

    def finish_literal(self, tok: _Token) -> Term:
        nxt = self.peek()
        if nxt.type == "langtag":
            self.next()
            return make_literal(tok.value, lang=nxt.value)
        if nxt.type == "punct" and nxt.value == "^^":
            self.next()
            dt = self.next()
            if dt.type == "iri":
                return make_literal(tok.value, datatype=self.resolve_iri(dt.value, dt))
            if dt.type == "pname":
                return make_literal(tok.value, datatype=self.resolve_pname(dt.value[0], dt.value[1], dt))
            self.error("expected datatype IRI after '^^'", dt)
        return make_literal(tok.value)

    # --- expressions -----------------------------------------------------

    def parse_constraint(self, depth: int) -> Expression:
        tok = self.peek()
        if tok.type == "punct" and tok.value == "(":
            self.next()
            expr = self.parse_expression(depth + 1)
            self.expect_punct(")")
            return expr
        if tok.type == "kw":
            return self.parse_primary(depth + 1)
        self.error("expected '(' or a function call after FILTER")

    def parse_expression(self, depth: int) -> Expression:
        if depth > MAX_DEPTH:
            self.error("expression nested too deeply")
        left = self.parse_and(depth)
        while self.at_punct("||"):
            self.next()
            left = Logical("||", left, self.parse_and(depth))
        return left

    def parse_and(self, depth: int) -> Expression:
        left = self.parse_relational(depth)
        while self.at_punct("&&"):
            self.next()
            left = Logical("&&", left, self.parse_relational(depth))
        return left

    def parse_relational(self, depth: int) -> Expression:
        left = self.parse_unary(depth)
        tok = self.peek()
        if tok.type == "punct" and tok.value in ("=", "!=", "<", "<=", ">", ">="):
            self.next()
            right = self.parse_unary(depth)
            return Comparison(tok.value, left, right)
        if tok.type == "kw" and tok.value in ("IN", "NOT"):
            raise UnsupportedFeature("IN expression")
        return left

    def parse_unary(self, depth: int) -> Expression:
        if depth > MAX_DEPTH:
            self.error("expression nested too deeply")
        tok = self.peek()
        if tok.type == "punct" and tok.value == "!":
            self.next()
            return Not(self.parse_unary(depth + 1))
        expr = self.parse_primary(depth)
        nxt = self.peek()
        if nxt.type == "punct" and nxt.value in ("+", "-", "*", "/"):
            raise UnsupportedFeature("arithmetic expression")
        return expr

    def parse_primary(self, depth: int) -> Expression:
        tok = self.next()
        if tok.type == "punct" and tok.value == "(":
            expr = self.parse_expression(depth + 1)
            self.expect_punct(")")
            return expr
        if tok.type == "var":
            return Var(tok.value)
        if tok.type == "string":
            return Constant(self.finish_literal(tok))
        if tok.type in ("number", "boolean"):
            return Constant(tok.value)
        if tok.type == "iri":
            return Constant(make_iri(self.resolve_iri(tok.value, tok)))
        if tok.type == "pname":
            return Constant(make_iri(self.resolve_pname(tok.value[0], tok.value[1], tok)))
        if tok.type == "kw":
            name = tok.value
            if name in SUPPORTED_FUNCTIONS:
                return self.parse_function(name, depth)
            if name in UNSUPPORTED_FUNCTIONS:
                raise UnsupportedFeature(f"function {name}")
            if name in UNSUPPORTED_AGGREGATES or name == "COUNT":
                raise UnsupportedFeature(f"aggregate {name} in expression")
            if name == "NOT":
                raise UnsupportedFeature("NOT EXISTS")
        self.error("expected an expression", tok)

    def parse_function(self, name: str, depth: int) -> FunctionCall:
        self.expect_punct("(")
        args: list[Expression] = []
        if not self.at_punct(")"):
            while True:
                args.append(self.parse_expression(depth + 1))
                if self.at_punct(","):
                    self.next()
                    continue
                break
        self.expect_punct(")")
        lo, hi = _FUNCTION_ARITY[name]
        if not (lo <= len(args) <= hi):
            self.error(f"{name} takes {lo} to {hi} arguments, got {len(args)}")
        if name == "BOUND" and not isinstance(args[0], Var):
            self.error("BOUND takes a variable")
        return FunctionCall(name, tuple(args))

    # --- modifiers -------------------------------------------------------

    def parse_modifiers(self, query: Query) -> None:
        while True:
            tok = self.peek()
            if tok.type != "kw":
                return
            if tok.value == "GROUP":
                if query.group_by is not None:
                    self.error("duplicate GROUP BY")
                self.next()
                self.expect_kw("BY")
                gvars: list[Var] = []
                while self.peek().type == "var":
                    gvars.append(Var(self.next().value))
                if not gvars:
                    if self.peek().type == "punct" and self.peek().value == "(":
                        raise UnsupportedFeature("GROUP BY expression")
                    self.error("expected variable after GROUP BY")
                query.group_by = tuple(gvars)
            elif tok.value == "HAVING":
                raise UnsupportedFeature("HAVING")
            elif tok.value == "ORDER":
                if query.order_by is not None:
                    self.error("duplicate ORDER BY")
                self.next()
                self.expect_kw("BY")
                keys: list[OrderKey] = []
                while True:
                    t = self.peek()
                    if t.type == "kw" and t.value in ("ASC", "DESC"):
                        self.next()
                        self.expect_punct("(")
                        expr = self.parse_expression(1)
                        self.expect_punct(")")
                        keys.append(OrderKey(expr, ascending=(t.value == "ASC")))
                    elif t.type == "var":
                        self.next()
                        keys.append(OrderKey(Var(t.value), ascending=True))
                    elif t.type == "punct" and t.value == "(":
                        self.next()
                        expr = self.parse_expression(1)
                        self.expect_punct(")")
                        keys.append(OrderKey(expr, ascending=True))
                    elif t.type == "kw" and t.value in SUPPORTED_FUNCTIONS:
                        self.next()
                        keys.append(OrderKey(self.parse_function(t.value, 1), ascending=True))
                    else:
                        break
                if not keys:
                    self.error("expected ordering condition after ORDER BY")
                query.order_by = tuple(keys)
            elif tok.value in ("LIMIT", "OFFSET"):
                self.next()
                num = self.next()
                if num.type != "number" or num.value.datatype != XSD_INTEGER or num.value.value.startswith("-"):
                    self.error(f"{tok.value} takes a non-negative integer", num)
                n = int(num.value.value)
                if tok.value == "LIMIT":
                    if query.limit is not None:
                        self.error("duplicate LIMIT")
                    query.limit = n
                else:
                    if query.offset is not None:
                        self.error("duplicate OFFSET")
                    query.offset = n
            elif tok.value == "VALUES":
                raise UnsupportedFeature("VALUES")
            else:
                return

    # --- semantic checks ---------------------------------------------------

    def check_projection(self, query: Query) -> None:
        if query.projection is STAR or isinstance(query.projection, str):
            if query.group_by is not None:
                self.error("SELECT * cannot be combined with GROUP BY")
            return
        bound = {v.name for v in pattern_variables(query.where)}
        bare = [item for item in query.projection if isinstance(item, Var)]
        aggregates = [item for item in query.projection if isinstance(item, CountAggregate)]
        if aggregates and bare and query.group_by is None:
            self.error("cannot project a bare variable alongside an aggregate without GROUP BY")
        if query.group_by is not None:
            grouped = {v.name for v in query.group_by}
            for v in bare:
                if v.name not in grouped:
                    self.error(f"projected variable ?{v.name} must appear in GROUP BY")
        if self.strict_projection:
            for v in bare:
                if v.name not in bound:
                    raise ProjectionUnbound(v.name)
            for agg in aggregates:
                if agg.argument is not None and agg.argument.name not in bound:
                    raise ProjectionUnbound(agg.argument.name)
        for agg in aggregates:
            if agg.alias.name in bound:
                self.error(f"AS alias ?{agg.alias.name} is already bound in the WHERE clause")


def parse_query(text: str, ambient_prefixes: dict[str, str] | None = None, *, strict_projection: bool = True) -> Query:
    """Parse query text into a Query AST.

    Prefixed names resolve against the query's own prologue first, then
    ``ambient_prefixes``.  All IRIs in the returned AST are absolute.
    """
    tokens = _Lexer(text).tokens()
    parser = _Parser(tokens, dict(ambient_prefixes or {}), strict_projection)
    return parser.parse_query()
