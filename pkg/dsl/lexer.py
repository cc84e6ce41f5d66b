import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
INT_RE = re.compile(r"[0-9]+")

PUNCTUATION = {
    "{": "LBRACE",
    "}": "RBRACE",
    "(": "LPAREN",
    ")": "RPAREN",
    ";": "SEMI",
}


@dataclass(frozen=True, order=True)
class SourceSpan:
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    expected: str
    found: str

    def __str__(self):
        return f"{self.span}: expected {self.expected}, found {self.found}"


class TokenType(str, Enum):
    IDENT = "IDENT"
    INT = "INT"
    LBRACE = "LBRACE"
    RBRACE = "RBRACE"
    LPAREN = "LPAREN"
    RPAREN = "RPAREN"
    SEMI = "SEMI"
    ARROW = "ARROW"
    LABEL = "LABEL"
    EOF = "EOF"


@dataclass(frozen=True)
class Token:
    type: TokenType
    value: str
    span: SourceSpan

    def describe(self):
        if self.type is TokenType.EOF:
            return "end of input"
        if self.type is TokenType.LABEL:
            return f"[{self.value}]"
        return self.value


def tokenize(text) -> Tuple[List[Token], List[ParseError]]:
    """
    Split process text into tokens. Unknown characters are reported and
    skipped so the parser can still look for further errors.
    """
    text = text.replace("\r\n", "\n")
    tokens: List[Token] = []
    errors: List[ParseError] = []
    i, line, column = 0, 1, 1

    def advance(count):
        nonlocal i, column
        i += count
        column += count

    while i < len(text):
        c = text[i]
        span = SourceSpan(line, column)
        if c == "\n":
            i += 1
            line += 1
            column = 1
        elif c.isspace():
            advance(1)
        elif c == "#":
            end = text.find("\n", i)
            advance((len(text) if end < 0 else end) - i)
        elif IDENT_RE.match(text, i):
            word = IDENT_RE.match(text, i).group()
            tokens.append(Token(TokenType.IDENT, word, span))
            advance(len(word))
        elif INT_RE.match(text, i):
            number = INT_RE.match(text, i).group()
            tokens.append(Token(TokenType.INT, number, span))
            advance(len(number))
        elif c in PUNCTUATION:
            tokens.append(Token(TokenType(PUNCTUATION[c]), c, span))
            advance(1)
        elif text.startswith("->", i):
            tokens.append(Token(TokenType.ARROW, "->", span))
            advance(2)
        elif c == "[":
            close = text.find("]", i)
            newline = text.find("\n", i)
            if close < 0 or (0 <= newline < close):
                stop = len(text) if newline < 0 else newline
                errors.append(ParseError(SourceSpan(line, column + stop - i), "]", "end of line"))
                advance(stop - i)
                continue
            label = text[i + 1:close].strip()
            if not label:
                errors.append(ParseError(span, "label", "[]"))
            else:
                tokens.append(Token(TokenType.LABEL, label, span))
            advance(close + 1 - i)
        else:
            errors.append(ParseError(span, "token", repr(c)))
            advance(1)

    tokens.append(Token(TokenType.EOF, "", SourceSpan(line, column)))
    return tokens, errors
