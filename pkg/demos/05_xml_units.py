#!/usr/bin/env python3
# Hierarchical retrieval: attribute pattern occurrences to XML elements of
# a chosen tag (the "retrievable units"), using balanced parentheses for
# the topology and a wavelet tree over the tag sequence.

from wtree.hierdoc import HierIndex, UnitMask

xml = b"""
<book>
  <chapter><section>wavelet trees everywhere</section>
           <section>rank and select</section></chapter>
  <chapter><section>suffix arrays</section>
           <section>wavelet trees again</section></chapter>
</book>
"""
hier = HierIndex.from_xml(xml)
print("tags :", hier.tag_names, " leaves(docs):", hier.m)

sec = hier.tag_id("section")
chap = hier.tag_id("chapter")

# expand: which unit does an occurrence in leaf i belong to?
p = hier.expand_tag(sec, 1)
print("\nlowest <section> over leaf 1 :", p, "covering docs", hier.leaf_range(p))
p = hier.expand_tag(chap, 4)
print("lowest <chapter> over leaf 4 :", p, "covering docs", hier.leaf_range(p))

# hdlist: the units of a tag that contain a pattern, with counts.
print("\nsections mentioning 'wavelet':")
for p, f in hier.hdlist(sec, b"wavelet", with_freq=True):
    print("   handle", p, "docs", hier.leaf_range(p), "freq", f)
print("chapters mentioning 'suffix' :", [
    hier.leaf_range(p) for p in hier.hdlist(chap, b"suffix")
])

# hdint: units containing BOTH patterns, with both frequencies.
print("\nchapters with 'wavelet' and 'rank':", [
    (hier.leaf_range(p), f1, f2)
    for p, f1, f2 in hier.hdint(chap, b"wavelet", b"rank")
])
print("sections with 'wavelet' and 'rank':", list(
    hier.hdint(sec, b"wavelet", b"rank")
))

# hdfreq: occurrences inside one unit's subtree.
root_handle = 1
print("\n'wavelet' occurrences in the whole book:", hier.hdfreq(b"wavelet", root_handle))

# Arbitrary unit sets: mark any nodes and expand against the mask.
mask = UnitMask.from_tag(hier, chap)
print("leaf 3 expands under the chapter mask to docs", hier.expand_marked(mask, 3))
