#!/usr/bin/env python3
"""Condensed-detachment search used to regenerate the bootstrap lemma files.

Finds Hilbert proofs of the core lemmas from a given axiom basis, then expands
each proof into a linear, substitution-free sequence of axiom/lemma instances
and modus ponens steps over the lemma's own variables.

Usage: cd_search.py lukasiewicz|kleene > crates/core/data/<basis>.hil
"""
import heapq
import sys

# ---------------------------------------------------------------- terms

def parse(s):
    toks = []
    i = 0
    while i < len(s):
        c = s[i]
        if c.isspace():
            i += 1
        elif s.startswith('<->', i):
            toks.append('='); i += 3
        elif s.startswith('->', i):
            toks.append('>'); i += 2
        elif c in '~&|()':
            toks.append(c); i += 1
        else:
            j = i
            while j < len(s) and (s[j].isalnum() or s[j] == '_'):
                j += 1
            toks.append(s[i:j]); i = j
    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else None

    def eat():
        t = toks[pos[0]]; pos[0] += 1; return t

    prec = {'=': 1, '>': 2, '|': 3, '&': 4}

    def unary():
        t = eat()
        if t == '~':
            return ('~', unary())
        if t == '(':
            e = expr(0)
            assert eat() == ')'
            return e
        return t

    def expr(minp):
        lhs = unary()
        while True:
            t = peek()
            if t not in prec or prec[t] < minp:
                return lhs
            eat()
            p = prec[t]
            # -> is right associative, the others left
            rhs = expr(p if t == '>' else p + 1)
            lhs = (t, lhs, rhs)

    e = expr(0)
    assert pos[0] == len(toks), s
    return e


def show(t):
    names = {'>': '->', '&': '&', '|': '|', '=': '<->'}
    if isinstance(t, str):
        return t
    if t[0] == '~':
        a = t[1]
        return '~' + (show(a) if isinstance(a, str) or a[0] == '~' else '(' + show(a) + ')')
    return '(' + show(t[1]) + ' ' + names[t[0]] + ' ' + show(t[2]) + ')'


def show_top(t):
    s = show(t)
    if not isinstance(t, str) and t[0] != '~':
        s = s[1:-1]
    return s


def size(t):
    if isinstance(t, str):
        return 1
    return 1 + sum(size(a) for a in t[1:])


def tvars(t, acc=None):
    if acc is None:
        acc = []
    if isinstance(t, str):
        if t not in acc:
            acc.append(t)
    else:
        for a in t[1:]:
            tvars(a, acc)
    return acc


def subst(t, s):
    if isinstance(t, str):
        return s.get(t, t)
    return (t[0],) + tuple(subst(a, s) for a in t[1:])


def walk(t, s):
    while isinstance(t, str) and t in s:
        t = s[t]
    return t


def occurs(v, t, s):
    t = walk(t, s)
    if isinstance(t, str):
        return t == v
    return any(occurs(v, a, s) for a in t[1:])


def unify(a, b, s):
    a = walk(a, s); b = walk(b, s)
    if a == b:
        return s
    if isinstance(a, str):
        if occurs(a, b, s):
            return None
        s = dict(s); s[a] = b; return s
    if isinstance(b, str):
        return unify(b, a, s)
    if a[0] != b[0] or len(a) != len(b):
        return None
    for x, y in zip(a[1:], b[1:]):
        s = unify(x, y, s)
        if s is None:
            return None
    return s


def resolve(t, s):
    t = walk(t, s)
    if isinstance(t, str):
        return t
    return (t[0],) + tuple(resolve(a, s) for a in t[1:])


def match(pat, t, s):
    if isinstance(pat, str):
        if pat in s:
            return s if s[pat] == t else None
        s = dict(s); s[pat] = t; return s
    if isinstance(t, str) or pat[0] != t[0] or len(pat) != len(t):
        return None
    for x, y in zip(pat[1:], t[1:]):
        s = match(x, y, s)
        if s is None:
            return None
    return s


def canon(t):
    m = {}
    for v in tvars(t):
        m[v] = 'v%d' % len(m)
    return subst(t, m)


def rename(t, tag):
    return subst(t, {v: v + tag for v in tvars(t)})


def detach(major, minor):
    if isinstance(major, str) or major[0] != '>':
        return None
    M = rename(major, '_a'); N = rename(minor, '_b')
    s = unify(M[1], N, {})
    if s is None:
        return None
    return canon(resolve(M[2], s))

# ---------------------------------------------------------------- search

def search(axioms, target, max_size, max_given=4000, window=400):
    """axioms: list of (name, term). Returns (theorems, proof-index) or None.

    Given-clause loop ordered by size. Forward subsumption is only checked
    against the most recent `window` theorems, which keeps each step linear.
    """
    thms = []      # (term, origin) origin = ('ax', name) | ('cd', i, j)
    heap = []
    seen = set()

    def push(t, origin):
        c = canon(t)
        if c in seen or size(c) > max_size:
            return
        seen.add(c)
        heapq.heappush(heap, (size(c), len(seen), c, origin))

    for name, t in axioms:
        push(t, ('ax', name))
    while heap and len(thms) < max_given:
        _, _, t, origin = heapq.heappop(heap)
        if origin[0] != 'ax' and any(
                size(u) < size(t) and match(u, t, {}) is not None
                for u, _ in thms[-window:]):
            continue
        idx = len(thms)
        thms.append((t, origin))
        if match(t, target, {}) is not None:
            return thms, idx
        for j in range(idx + 1):
            u = thms[j][0]
            r = detach(t, u)
            if r is not None:
                push(r, ('cd', idx, j))
            if j != idx:
                r = detach(u, t)
                if r is not None:
                    push(r, ('cd', j, idx))
    return None


def expand(thms, idx, instance, lines, memo):
    """Emit a linear proof of `instance` (an instance of thms[idx])."""
    if instance in memo:
        return memo[instance]
    t, origin = thms[idx]
    if origin[0] == 'ax':
        lines.append((instance, origin[1]))
    else:
        _, i, j = origin
        M = rename(thms[i][0], '_a'); N = rename(thms[j][0], '_b')
        s = unify(M[1], N, {})
        concl = resolve(M[2], s)
        tau = match(concl, instance, {})
        assert tau is not None
        m_inst = resolve(M, s)
        n_inst = resolve(N, s)
        leftovers = [v for v in tvars(m_inst) + tvars(n_inst) if v not in tau]
        full = dict(tau)
        for v in leftovers:
            full[v] = 'p'
        m_inst = subst(m_inst, full)
        n_inst = subst(n_inst, full)
        a = expand(thms, i, m_inst, lines, memo)
        b = expand(thms, j, n_inst, lines, memo)
        if instance in memo:
            return memo[instance]
        lines.append((instance, ('mp', a, b)))
    memo[instance] = len(lines)
    return len(lines)

# ---------------------------------------------------------------- bases

LUKASIEWICZ = [
    ('ax:1', '(p -> q) -> ((q -> r) -> (p -> r))'),
    ('ax:2', '(~p -> p) -> p'),
    ('ax:3', 'p -> (~p -> q)'),
]

KLEENE = [
    ('ax:1', 'p -> (q -> p)'),
    ('ax:2', '(p -> q) -> ((p -> (q -> r)) -> (p -> r))'),
    ('ax:3', 'p -> (q -> (p & q))'),
    ('ax:4', '(p & q) -> p'),
    ('ax:5', '(p & q) -> q'),
    ('ax:6', 'p -> (p | q)'),
    ('ax:7', 'q -> (p | q)'),
    ('ax:8', '(p -> r) -> ((q -> r) -> ((p | q) -> r))'),
    ('ax:9', '(p -> q) -> ((p -> ~q) -> ~p)'),
    ('ax:10', '~~p -> p'),
]

# Lemmas the deduction-theorem transformer builds on besides the second
# Kleene axiom, which for the Łukasiewicz basis is assembled by hand from
# `pre`, `c` and `w` (see the .hyp files).
TARGETS = {
    'lukasiewicz': [
        ('k', 'p -> (q -> p)'),
        ('id', 'p -> p'),
        ('pre', '(q -> r) -> ((p -> q) -> (p -> r))'),
        ('w', '(p -> (p -> q)) -> (p -> q)'),
        ('c', '(p -> (q -> r)) -> (q -> (p -> r))'),
    ],
    'kleene': [
        ('k', 'p -> (q -> p)'),
        ('id', 'p -> p'),
    ],
}


def run(basis_name, axioms, targets, max_size):
    known = [(n, parse(s)) for n, s in axioms]
    out = []
    for name, src in targets:
        goal = parse(src)
        if any(n == 'lem:' + name for n, _ in known):
            continue
        res = None
        for cap in range(max(9, size(goal)), max_size + 1, 2):
            print('searching %s at size %d' % (name, cap), file=sys.stderr)
            res = search(known, goal, cap)
            if res is not None:
                break
        if res is None:
            sys.exit('no proof for %s (%s)' % (name, src))
        thms, idx = res
        lines, memo = [], {}
        expand(thms, idx, goal, lines, memo)
        out.append((name, goal, lines))
        known.append(('lem:' + name, goal))
        print('found %s: %d lines' % (name, len(lines)), file=sys.stderr)
    return out


def emit(basis, lemmas):
    print('# Generated by tools/cd_search.py %s; do not edit by hand.' % basis)
    for name, goal, lines in lemmas:
        print()
        print('lemma %s: %s' % (name, show_top(goal)))
        for n, (t, just) in enumerate(lines, 1):
            if isinstance(just, tuple):
                j = 'mp %d %d' % (just[1], just[2])
            else:
                kind, ref = just.split(':')
                j = '%s %s' % (kind, ref)
            print('  %d: %s ; %s' % (n, show_top(t), j))


def main():
    basis = sys.argv[1]
    max_size = int(sys.argv[2]) if len(sys.argv) > 2 else 31
    if basis == 'lukasiewicz':
        axioms = LUKASIEWICZ
    elif basis == 'kleene':
        axioms = KLEENE
    else:
        sys.exit('unknown basis ' + basis)
    lemmas = run(basis, axioms, TARGETS[basis], max_size)
    emit(basis, lemmas)


if __name__ == '__main__':
    main()
