"""Lightweight structural index for Java-like sources.

Maps (file, line) to the enclosing class-like declaration and method by
scanning tokens with brace matching. Honors string/char literals and
line/block comments; generic parameter lists are skipped as groups. Full
Java parsing is deliberately out of scope: anything ambiguous (lambda
bodies, initializer blocks, annotation bodies) degrades to an opaque brace
group owned by the surrounding declaration.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseFailure, UnknownFile
from .model import ChangeBead, Snapshot

CLASS_KEYWORDS = {"class", "interface", "enum"}

# An identifier directly before a parameter list that is one of these is a
# control construct, never a method declaration.
CONTROL_KEYWORDS = {
    "if", "while", "for", "switch", "catch", "synchronized", "do", "try", "new", "return",
}

KIND_CLASS = "class"
KIND_METHOD = "method"

_WORD_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_WORD_CHARS = _WORD_START | set("0123456789")


@dataclass(frozen=True)
class Declaration:
    kind: str
    name: str  # fully qualified; methods carry their parameter list
    start: int  # first line of the declaration statement
    end: int  # line of the closing brace, inclusive


@dataclass(frozen=True)
class FileStructure:
    declarations: tuple[Declaration, ...]


class _Scanner:
    """Single pass over one file's text; see parse_structure."""

    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.line = 1
        self.n = len(text)
        # pending tokens of the current statement (only at paren depth 0):
        # words, ".", "=", "->", "@", ("(", params-text) groups
        self.pending: list = []
        self.pending_line = 0
        self.paren_depth = 0
        self.package = ""
        # frames: [kind, name, start_line] with kind class/method/block
        self.stack: list[list] = []
        self.decls: list[Declaration] = []
        self.stripped: list[str] = []  # text with comment/literal bodies blanked

    def fail(self, reason: str):
        raise ParseFailure(reason)

    def _emit(self, ch: str):
        self.stripped.append(ch)

    def _advance(self, ch: str):
        if ch == "\n":
            self.line += 1
        self.i += 1

    def _skip_line_comment(self):
        self._emit(" ")
        self._emit(" ")
        self.i += 2
        while self.i < self.n and self.text[self.i] != "\n":
            self._emit(" ")
            self.i += 1

    def _skip_block_comment(self):
        self._emit(" ")
        self._emit(" ")
        self.i += 2
        while self.i < self.n:
            ch = self.text[self.i]
            if ch == "*" and self.i + 1 < self.n and self.text[self.i + 1] == "/":
                self._emit(" ")
                self._emit(" ")
                self.i += 2
                return
            self._emit("\n" if ch == "\n" else " ")
            self._advance(ch)
        self.fail("unterminated-comment")

    def _skip_literal(self, quote: str):
        self._emit(" ")
        self.i += 1
        while self.i < self.n:
            ch = self.text[self.i]
            if ch == "\\":
                if self.i + 1 >= self.n:
                    break
                self._emit(" ")
                self._emit(" ")
                self.i += 2
                continue
            if ch == quote:
                self._emit(" ")
                self.i += 1
                return
            if ch == "\n":
                break
            self._emit(" ")
            self.i += 1
        self.fail("unterminated-literal")

    def _try_skip_generics(self) -> bool:
        """Skip a balanced <...> group after an identifier; False if not one."""
        j = self.i
        depth = 0
        while j < self.n:
            c = self.text[j]
            if c == "<":
                depth += 1
            elif c == ">":
                depth -= 1
                if depth == 0:
                    break
            elif c in "(){};":
                return False
            elif c not in " \t\n,.?&[]" and c not in _WORD_CHARS:
                return False
            j += 1
        else:
            return False
        while self.i <= j:
            ch = self.text[self.i]
            self._emit("\n" if ch == "\n" else " ")
            self._advance(ch)
        return True

    def _pend(self, tok):
        if not self.pending:
            self.pending_line = self.line
        self.pending.append(tok)

    def _read_word(self) -> str:
        start = self.i
        while self.i < self.n and self.text[self.i] in _WORD_CHARS:
            self._emit(self.text[self.i])
            self.i += 1
        return self.text[start:self.i]

    def _read_paren_group(self) -> str:
        """Consume a balanced (...) group, returning its inner text.

        Literals/comments inside are stripped; nested braces (lambda
        bodies) keep brace tracking alive via the frame stack.
        """
        self._emit("(")
        self.i += 1
        depth = 1
        inner: list[str] = []
        while self.i < self.n:
            ch = self.text[self.i]
            if ch == "/" and self.i + 1 < self.n and self.text[self.i + 1] == "/":
                self._skip_line_comment()
                continue
            if ch == "/" and self.i + 1 < self.n and self.text[self.i + 1] == "*":
                self._skip_block_comment()
                continue
            if ch in "\"'":
                self._skip_literal(ch)
                inner.append(" ")
                continue
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    self._emit(")")
                    self.i += 1
                    return "".join(inner)
            elif ch == "{":
                self.stack.append([None, "", self.line])
            elif ch == "}":
                if not self.stack:
                    self.fail("unbalanced-braces")
                self.stack.pop()
            inner.append(ch)
            self._emit(ch)
            self._advance(ch)
        # unbalanced parens degrade gracefully: treat rest as consumed
        return "".join(inner)

    def _class_chain(self) -> list[str]:
        return [f[1] for f in self.stack if f[0] == KIND_CLASS]

    def _classify_open(self):
        """Decide what the '{' at the cursor opens, from the pending tokens."""
        toks = self.pending
        kind = None
        name = ""
        for idx, t in enumerate(toks):
            if t in CLASS_KEYWORDS and idx + 1 < len(toks) and isinstance(toks[idx + 1], str):
                nxt = toks[idx + 1]
                if nxt and nxt[0] in _WORD_START:
                    kind = KIND_CLASS
                    name = nxt
        if kind is None:
            kind = self._match_method()
            if kind:
                kind, name = kind
        if kind == KIND_CLASS:
            prefix = ".".join(([self.package] if self.package else []) + self._class_chain())
            qual = f"{prefix}.{name}" if prefix else name
            self.stack.append([KIND_CLASS, qual, self.pending_line])
        elif kind:
            self.stack.append([KIND_METHOD, name, self.pending_line])
        else:
            self.stack.append([None, "", self.pending_line or self.line])

    def _match_method(self):
        """Method/constructor pattern: IDENT (params) [throws ...] '{'.

        Only directly inside a class body; the identifier must not be a
        control keyword or annotation name, and the statement must not be
        an initializer ('=' seen) or lambda ('->' seen).
        """
        if not self.stack or self.stack[-1][0] != KIND_CLASS:
            return None
        toks = self.pending
        if "=" in toks or "->" in toks:
            return None
        group_idx = None
        for idx in range(len(toks) - 1, -1, -1):
            if isinstance(toks[idx], tuple):
                group_idx = idx
                break
        if group_idx is None or group_idx == 0:
            return None
        ident = toks[group_idx - 1]
        if not isinstance(ident, str) or not ident or ident[0] not in _WORD_START:
            return None
        if ident in CONTROL_KEYWORDS or ident in CLASS_KEYWORDS:
            return None
        if group_idx >= 2 and toks[group_idx - 2] == "@":
            return None
        for t in toks[group_idx + 1:]:
            if isinstance(t, tuple) or t not in {"throws", ",", "."} and not (
                isinstance(t, str) and t and t[0] in _WORD_START
            ):
                return None
        params = " ".join(toks[group_idx][1].split())
        cls = self.stack[-1][1]
        return KIND_METHOD, f"{cls}.{ident}({params})"

    def run(self) -> FileStructure:
        while self.i < self.n:
            ch = self.text[self.i]
            nxt = self.text[self.i + 1] if self.i + 1 < self.n else ""
            if ch == "/" and nxt == "/":
                self._skip_line_comment()
            elif ch == "/" and nxt == "*":
                self._skip_block_comment()
            elif ch in "\"'":
                self._skip_literal(ch)
            elif ch == "(":
                grp = self._read_paren_group()
                self._pend(("(", grp))
            elif ch == ")":
                # stray closer; ignore (parens stay balanced via groups)
                self._emit(ch)
                self.i += 1
            elif ch == "{":
                self._classify_open()
                self.pending.clear()
                self._emit(ch)
                self.i += 1
            elif ch == "}":
                if not self.stack:
                    self.fail("unbalanced-braces")
                kind, name, start = self.stack.pop()
                if kind in (KIND_CLASS, KIND_METHOD):
                    self.decls.append(Declaration(kind=kind, name=name, start=start, end=self.line))
                self.pending.clear()
                self._emit(ch)
                self.i += 1
            elif ch == ";":
                if self.pending and self.pending[0] == "package":
                    self.package = "".join(t for t in self.pending[1:] if isinstance(t, str))
                self.pending.clear()
                self._emit(ch)
                self.i += 1
            elif ch in _WORD_START:
                word = self._read_word()
                self._pend(word)
                if self.i < self.n and self.text[self.i] == "<":
                    self._try_skip_generics()
            elif ch in ".=@":
                if ch == "=" and nxt == "=":
                    self._emit("==")
                    self.i += 2
                    continue
                self._pend(ch)
                self._emit(ch)
                self.i += 1
            elif ch == "-" and nxt == ">":
                self._pend("->")
                self._emit("  ")
                self.i += 2
            else:
                self._emit("\n" if ch == "\n" else ch)
                self._advance(ch)
        if self.stack:
            self.fail("unbalanced-braces")
        order = {d: i for i, d in enumerate(self.decls)}
        decls = sorted(self.decls, key=lambda d: (d.start, -d.end, order[d]))
        return FileStructure(declarations=tuple(decls))


def parse_structure(text: str) -> FileStructure:
    """Structural declarations of one file; raises ParseFailure on broken text."""
    return _Scanner(text).run()


def stripped_source(text: str) -> str:
    """The file text with comment and literal interiors blanked out.

    Brace depth counted naively on this string equals the scanner's; used
    as an independent oracle in tests.
    """
    sc = _Scanner(text)
    sc.run()
    return "".join(sc.stripped)


def locate(structures: dict[str, FileStructure], file: str, line: int) -> tuple[str | None, str | None]:
    """Innermost (class, method) whose ranges contain ``line``, or Nones."""
    if file not in structures:
        raise UnknownFile(file)
    best_class: Declaration | None = None
    best_method: Declaration | None = None
    for d in structures[file].declarations:
        if d.start <= line <= d.end:
            if d.kind == KIND_CLASS:
                if best_class is None or (d.end - d.start) < (best_class.end - best_class.start):
                    best_class = d
            else:
                if best_method is None or (d.end - d.start) < (best_method.end - best_method.start):
                    best_method = d
    return (
        best_class.name if best_class else None,
        best_method.name if best_method else None,
    )


def annotate_beads(beads: list[ChangeBead], base: Snapshot) -> list[ChangeBead]:
    """Beads with enclosing class/method filled in.

    Identity comes from each bead's first hunk located in the bead's
    pre-change snapshot (pure insertions locate at the insertion point).
    Raises ParseFailure tagged with the offending seq if a pre-change file
    does not parse.
    """
    from dataclasses import replace

    from .model import apply_hunks

    cache: dict[str, FileStructure] = {}
    out: list[ChangeBead] = []
    snap = base
    for bead in beads:
        first = bead.hunks[0]
        text = snap.text(first.file)
        cls = mth = None
        if text:
            fs = cache.get(text)
            if fs is None:
                try:
                    fs = parse_structure(text)
                except ParseFailure as pf:
                    raise ParseFailure(pf.reason, file=first.file, seq=bead.seq) from None
                cache[text] = fs
            cls, mth = locate({first.file: fs}, first.file, first.start)
        out.append(replace(bead, enclosing_class=cls, enclosing_method=mth))
        snap = apply_hunks(snap, bead)
    return out
