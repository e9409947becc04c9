#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mup {

// Example programs shipped with the interpreter. The same text lives in
// programs/*.mpl; the test suite keeps the two in sync.
struct CorpusEntry {
    std::string name;
    std::string file;
    std::string source;
    std::vector<std::string> queries;
    bool uses_io = false;
};

inline const std::vector<CorpusEntry> &shipped_corpus() {
    static const std::vector<CorpusEntry> corpus = {
        {"max", "max.mpl", R"mpl(% Larger of two numbers. The two disjuncts are mutually exclusive.
max(X, Y, M) :- (X >= Y, M = X) # (X < Y, M = Y).
)mpl",
         {"max(3, 9, M).", "max(9, 3, M).", "max(9, 3, 9).", "max(4, 4, M)."},
         false},
        {"f", "f.mpl", R"mpl(% f(X, Y): Y = 0 when X < 2, Y = 3 when X >= 2.
f(X, Y) :- (X >= 2, Y = 3) # (X < 2, Y = 0).
)mpl",
         {"f(1, Y).", "f(5, Y).", "f(2, Y).", "f(-7, Y)."},
         false},
        {"member", "member.mpl", R"mpl(% Deterministic membership: stops at the first occurrence.
member(X, [Y|L]) :- (Y = X) # member(X, L).
)mpl",
         {"member(X, [a,b,c]).", "member(b, [a,b,c]).", "member(d, [a,b,c]).", "member(X, [])."},
         false},
        {"member_classical", "member_classical.mpl", R"mpl(% Classical membership for contrast: finds every occurrence.
member(X, [Y|L]) :- (Y = X) ; member(X, L).
)mpl",
         {"member(X, [a,b,c]).", "member(b, [a,b,b])."},
         false},
        {"son", "son.mpl", R"mpl(% son(X, Y): Y is a son of X.
son(X, Y) :- (male(X), father(Y, X)) # (female(X), mother(Y, X)).

male(tom).
father(bob, tom).
father(jim, tom).

female(ann).
mother(sam, ann).
)mpl",
         {"son(tom, Y).", "son(ann, Y).", "son(bob, Y)."},
         false},
        {"classify", "classify.mpl", R"mpl(% Nested choices: the first matching band wins.
classify(X, C) :- (X < 0, C = negative) # (X =:= 0, C = zero) # (X < 10, C = small) # C = large.
)mpl",
         {"classify(-3, C).", "classify(0, C).", "classify(7, C).", "classify(42, C)."},
         false},
        {"pick", "pick.mpl", R"mpl(% A choice commits only within itself: color/1 keeps its alternatives.
pick(X) :- color(X), (warm(X) # X = blue).

color(red).
color(green).
color(blue).

warm(red).
)mpl",
         {"pick(X).", "pick(green)."},
         false},
        {"rprime", "rprime.mpl", R"mpl(% Reads a number and reports whether it is prime or composite.
rprime :- read(X), ((prime(X), write('prime')) # (composite(X), write('composite'))).

prime(2).
prime(N) :- N > 2, no_divisor(N, 2).

no_divisor(N, D) :- D * D > N # (N mod D > 0, D1 is D + 1, no_divisor(N, D1)).

composite(N) :- N > 3, has_divisor(N, 2).

has_divisor(N, D) :- D * D =< N, (N mod D =:= 0 # (D1 is D + 1, has_divisor(N, D1))).
)mpl",
         {"rprime."},
         true},
    };
    return corpus;
}

inline const CorpusEntry &corpus_entry(const std::string &name) {
    for (const auto &e : shipped_corpus())
        if (e.name == name)
            return e;
    throw std::out_of_range("no corpus entry " + name);
}

inline const char *const kLoopProgram = "% Never terminates without a depth limit.\np :- p.\n";

} // namespace mup
