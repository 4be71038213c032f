#!/usr/bin/env python3
# Document retrieval over arbitrary byte strings: suffix-array search plus
# a wavelet tree over the document array. Works for languages without word
# boundaries, DNA, source code -- any substring is a query.

from wtree.docindex import DocIndex

docs = [
    b"ana",
    b"banana",
    b"bandana",
    b"cabana",
]
idx = DocIndex(docs)
print("documents:", [d.decode() for d in docs])

# pattern_search finds the suffix-array interval of all occurrences.
sp, ep = idx.pattern_search(b"an")
print("\noccurrences of 'an'          :", ep - sp + 1)

# dlist reports each matching document once, ascending, with its tf --
# in time sensitive to the number of documents, not of occurrences.
print("dlist('an')                  :", list(idx.dlist(b"an")))
print("dlist('ban')                 :", list(idx.dlist(b"ban")))

# dfreq is two rank queries on the document array.
print("dfreq('na', banana)          :", idx.dfreq(b"na", 2))

# dint lists documents holding several patterns at once (threshold t of k);
# t=1 is the union, t=k the intersection.
print("dint(an & ban)               :", list(idx.dint([b"an", b"ban"])))
print("dint(an | cab)               :", list(idx.dint([b"an", b"cab"], t=1)))

# Temporal restriction: document ids double as version numbers, so a range
# of ids is a time window.
print("dlist('an') in docs 2..3     :", list(idx.dlist(b"an", dmin=2, dmax=3)))
print("dint in docs 2..4            :", list(idx.dint([b"an", b"na"], dmin=2, dmax=4)))
