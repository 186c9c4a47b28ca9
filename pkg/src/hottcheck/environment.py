"""Typing contexts and the global environment of checked declarations."""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import HitDecl, Term
from .values import Value, fresh_var


@dataclass(frozen=True)
class Context:
    """Local telescope.  types[l] is the type value of the variable at
    level l; env is the matching value environment indexed by de Bruijn
    index (env[0] innermost), for evaluating open terms."""

    types: tuple = ()
    env: tuple = ()
    hints: tuple = ()

    def __len__(self) -> int:
        return len(self.types)

    def extend(self, ty: Value, hint: str | None = None) -> "Context":
        var = fresh_var(len(self.types))
        return Context(self.types + (ty,), (var,) + self.env, self.hints + (hint,))

    def extend_with(self, ty: Value, value: Value, hint: str | None = None) -> "Context":
        return Context(self.types + (ty,), (value,) + self.env, self.hints + (hint,))

    def var_type(self, index: int) -> Value:
        return self.types[len(self.types) - 1 - index]


@dataclass
class Definition:
    type_term: Term
    body_term: Term
    type_value: Value | None = None
    body_value: Value | None = None


@dataclass
class Postulate:
    type_term: Term
    type_value: Value | None = None


@dataclass
class HitInfo:
    """A checked HIT declaration plus its generated eliminator data."""

    decl: HitDecl
    # method type terms, scoped in [params..., motive, earlier methods...];
    # ordered point-constructors first, then path-constructors.
    method_types: list = field(default_factory=list)
    # eliminator constant name per motive universe: {0: "X-elim", 1: "X-elim1"}
    elim_names: dict = field(default_factory=dict)


class DuplicateName(Exception):
    pass


class GlobalEnv:
    """Ordered map of checked declarations.  Entries only reference
    earlier entries; names are unique across all three namespaces."""

    def __init__(self):
        self.definitions: dict[str, Definition] = {}
        self.postulates: dict[str, Postulate] = {}
        self.hits: dict[str, HitInfo] = {}
        self.order: list[str] = []
        # read-back memo: values are shared aggressively (definition
        # bodies are cached), so quoting keys on object identity; the
        # keep list pins keyed objects so ids stay unique
        self.quote_cache: dict = {}
        self.quote_keep: list = []
        # hash-consing of read-back terms: structurally identical normal
        # forms share one object, keyed bottom-up on child identities
        self.intern_table: dict = {}
        self.intern_ids: dict = {}
        # closure-application memo, keyed on closure and argument identity
        self.apply_cache: dict = {}
        self.apply_keep: list = []
        # evaluation memo, keyed on term and environment identity
        self.eval_cache: dict = {}
        self.eval_keep: list = []
        # hash-consing of values: structurally identical values built by
        # the evaluator share one object, so identity tests and memo
        # keys recognize them
        self.value_intern: dict = {}
        self.value_keep: list = []
        # free-variable levels per value object, keyed on identity
        self.free_cache: dict = {}
        self.free_keep: list = []
        # free de Bruijn indices per interned term, keyed on identity
        self.term_free_cache: dict = {}
        self.term_free_keep: list = []
        # typechecking memo for interned terms (normal forms share
        # subterms heavily, so re-checking them revisits the same node
        # under equivalent contexts many times)
        self.tc_cache: dict = {}
        self.tc_keep: list = []

    def __contains__(self, name: str) -> bool:
        return (
            name in self.definitions or name in self.postulates or name in self.hits
        )

    def _add(self, name: str):
        if name in self:
            raise DuplicateName(name)
        self.order.append(name)

    def add_definition(self, name: str, entry: Definition):
        self._add(name)
        self.definitions[name] = entry

    def add_postulate(self, name: str, entry: Postulate):
        self._add(name)
        self.postulates[name] = entry

    def add_hit(self, name: str, info: HitInfo):
        self._add(name)
        self.hits[name] = info

    def type_term_of(self, name: str) -> Term:
        if name in self.definitions:
            return self.definitions[name].type_term
        if name in self.postulates:
            return self.postulates[name].type_term
        raise KeyError(name)
