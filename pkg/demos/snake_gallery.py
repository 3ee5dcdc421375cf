"""Build every snake lattice for short words and read each word back from the lattice alone."""

from itertools import product

from khovlat.checker import check_lattice
from khovlat.classify import recognize_snake, snake_poset

for length in range(4):
    for letters in product("LR", repeat=length):
        word = "".join(letters)
        lat = snake_poset(word)
        back = recognize_snake(lat)
        verdict = check_lattice(lat).verdict.status
        print(f"{word or '(empty)':8} {len(lat):3} elements  recognized as {back or '(empty)':6} {verdict}")
