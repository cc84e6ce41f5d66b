"""
Recursive-descent parser for .wfp process files:

    process <ident> { <decl>* }

    decl := start <ident>; | end <ident>; | task <ident>;
          | gateway <kind> <ident>;      kind: and_split ... n_of_m(<int>)
          | <ident> -> <ident> [<label>]? ;

A declaration is an edge iff its second token is `->`, so keywords remain
usable as node ids.
"""
import logging
from typing import List, Optional

from simulator.errors import DslError
from simulator.process import END, START, TASK, Edge, GatewayType, ProcessDefinition, ValidationReport, build_process, gateway
from dsl.lexer import ParseError, Token, TokenType, tokenize

logger = logging.getLogger(__name__)

NODE_KEYWORDS = {"start": START, "end": END, "task": TASK}
GATEWAY_KEYWORDS = {gateway_type.value: gateway_type for gateway_type in GatewayType}


class _Resync(Exception):
    def __init__(self, error):
        self.error = error


class Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0
        self.errors: List[ParseError] = []
        self.name: Optional[str] = None
        self.nodes = []
        self.edges: List[Edge] = []

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self):
        token = self.current
        if token.type is not TokenType.EOF:
            self.pos += 1
        return token

    def _fail(self, expected, token=None):
        token = token or self.current
        raise _Resync(ParseError(token.span, expected, token.describe()))

    def _expect(self, token_type, expected):
        if self.current.type is not token_type:
            self._fail(expected)
        return self._advance()

    def _recover(self):
        while self.current.type not in (TokenType.SEMI, TokenType.RBRACE, TokenType.EOF):
            self._advance()
        if self.current.type is TokenType.SEMI:
            self._advance()

    def parse_process(self):
        try:
            keyword = self._expect(TokenType.IDENT, "process")
            if keyword.value != "process":
                self._fail("process", keyword)
            self.name = self._expect(TokenType.IDENT, "process name").value
            self._expect(TokenType.LBRACE, "{")
        except _Resync as resync:
            self.errors.append(resync.error)
            return

        while self.current.type not in (TokenType.RBRACE, TokenType.EOF):
            try:
                self._declaration()
            except _Resync as resync:
                self.errors.append(resync.error)
                self._recover()

        try:
            self._expect(TokenType.RBRACE, "}")
            self._expect(TokenType.EOF, "end of input")
        except _Resync as resync:
            self.errors.append(resync.error)

    def _declaration(self):
        first = self._expect(TokenType.IDENT, "declaration")
        if self.current.type is TokenType.ARROW:
            self._advance()
            target = self._expect(TokenType.IDENT, "node id")
            label = None
            if self.current.type is TokenType.LABEL:
                label = self._advance().value
            self._expect(TokenType.SEMI, ";")
            self.edges.append(Edge(first.value, target.value, label))
        elif first.value in NODE_KEYWORDS:
            node_id = self._expect(TokenType.IDENT, "node id")
            self._expect(TokenType.SEMI, ";")
            self.nodes.append((node_id.value, NODE_KEYWORDS[first.value]))
        elif first.value == "gateway":
            kind = self._expect(TokenType.IDENT, "gateway kind")
            if kind.value not in GATEWAY_KEYWORDS:
                self._fail("gateway kind", kind)
            gateway_type = GATEWAY_KEYWORDS[kind.value]
            n = None
            if gateway_type is GatewayType.N_OF_M:
                self._expect(TokenType.LPAREN, "(")
                n = int(self._expect(TokenType.INT, "integer").value)
                self._expect(TokenType.RPAREN, ")")
            node_id = self._expect(TokenType.IDENT, "node id")
            self._expect(TokenType.SEMI, ";")
            self.nodes.append((node_id.value, gateway(gateway_type, n)))
        else:
            self._fail("start, end, task, gateway or an edge", first)


def parse(text) -> ProcessDefinition:
    """
    Parse process text into a validated definition.

    Raises DslError carrying every syntax error, or the ValidationReport when
    the text is well-formed but the net violates structural rules.
    """
    tokens, errors = tokenize(text)
    parser = Parser(tokens)
    parser.parse_process()
    errors = sorted(errors + parser.errors, key=lambda error: error.span)
    if errors:
        raise DslError(errors=errors)

    result = build_process(parser.name, parser.nodes, parser.edges)
    if isinstance(result, ValidationReport):
        raise DslError(report=result)
    logger.debug("parsed process %s: %d nodes, %d edges", result.name, len(result.nodes), len(result.edges))
    return result


def load_process(path) -> ProcessDefinition:
    with open(path, "r", encoding="utf-8") as f:
        return parse(f.read())
