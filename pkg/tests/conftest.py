from hypothesis import strategies as st

from nonleighton.words import free_reduce

GENS = ("a", "b", "c")

letters = st.tuples(st.sampled_from(GENS), st.sampled_from((1, -1)))
words = st.lists(letters, max_size=12).map(tuple)
reduced_words = words.map(free_reduce)
