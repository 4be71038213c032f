#!/usr/bin/env python3
# One inverted index, two personalities: the stored order serves ranked
# retrieval (postings sorted by tf), while range-quantile machinery
# recovers the docid-sorted view on demand -- same bits, both orders.

from wtree.invindex import InvIndex

texts = [
    "to be or not to be",
    "to code is to be",
    "code wins arguments",
    "arguments about code style",
    "style to spare",
]
ix = InvIndex.from_texts(texts)
print("documents:", ix.m, " vocabulary:", ix.nu, " postings:", ix.n)

t = ix.term_id("to")
print("\nterm 'to' (df =", ix.df(t), ")")
print("ranked view  L_t:", [(ix.lt_get(t, i), ix.tf_at(t, i)) for i in range(1, ix.df(t) + 1)])
print("docid view   F_t:", [ix.ft_get(t, k) for k in range(1, ix.df(t) + 1)])
print("segment F_t[2,3]:", list(ix.ft_segment(t, 2, 3)))

# Intersection works directly on the docid views, adaptively.
code = ix.term_id("code")
print("\ndocs with 'to' and 'code'   :", [d for d, _ in ix.intersect([t, code])])
print("docs with either (t=1)      :", [d for d, _ in ix.intersect([t, code], threshold=1)])

# Fingered iterator: the workhorse of merge-style intersection algorithms.
it = ix.ft_iter(t)
print("first doc >= 2 in F_to      :", it.seek_doc(2))
print("then first doc >= 4         :", it.seek_doc(4))

# Ranked retrieval: threshold prefixes of tf-sorted lists, merged in docid
# order round by round, accumulating scores.
prefix = ix.persin_prefix(t, 2)
print("\nentries of L_to with tf >= 2:", prefix)
acc = ix.persin_round([], t, 1)
acc = ix.persin_round(acc, code, 1)
print("accumulated (doc, tf sums)  :", acc)

# Summaries: the terms of one document, in vocabulary order.
print("\nlocal vocabulary of doc 4   :", [ix.term_string(w) for w in ix.local_vocab(4)])
present, off = ix.contains(code, 4)
print("'code' in doc 4?            :", present, "at list offset", off)

# Stemming without extra space: contiguous vocabulary ranges act as one
# merged term for every docid-ordered operation.
lo, hi = ix.stem_range("argument")
print("\nstem 'argument*' covers     :", [ix.term_string(x) for x in range(lo, hi + 1)])
print("docs of the merged view     :", [d for d, _ in ix.term_docs((lo, hi))])
print("merged view intersect 'code':", [d for d, _ in ix.intersect([(lo, hi), code])])
print("total stemmed tf in doc 4   :", ix.sum_tf_stemmed((lo, hi), 4))
