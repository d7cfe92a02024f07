# Reference gestalt ratios from CPython's difflib (no junk, autojunk off),
# computed on lowercased inputs.
import difflib, json, random

random.seed(20241018)
menus = [json.load(open(p)) for p in ("crates/core/data/original_menu.json", "crates/core/data/generated_recipes.json")]
recipes = [r for m in menus for r in m]
proj = [f"{r['title'].lower()}; {', '.join(r['ingredients'])}" for r in recipes]

pairs = [("abcd", "abcd"), ("abcd", "bcde"), ("abc", "xyz"), ("", ""), ("abc", ""),
         ("Tofu curry ramen", "Chicken Curry Ramen"), ("béchamel", "bechamel"), ("Crème Brûlée", "creme brulee")]
for _ in range(80):
    a, b = random.sample(proj, 2)
    pairs.append((a, b))
for _ in range(60):
    a, b = random.sample(recipes, 2)
    pairs.append((a["title"], b["title"]))
for _ in range(80):
    alpha = random.choice(["ab", "abc", "abcd", "abcdefgh", "aé b"])
    a = "".join(random.choice(alpha) for _ in range(random.randint(0, 30)))
    b = "".join(random.choice(alpha) for _ in range(random.randint(0, 30)))
    pairs.append((a, b))
for _ in range(20):
    a = "".join(random.choice("abcdefghij ") for _ in range(random.randint(200, 260)))
    b = a[random.randint(0, 50):] + "".join(random.choice("abc") for _ in range(20))
    pairs.append((a, b))

out = []
for a, b in pairs:
    sm = difflib.SequenceMatcher(None, a.lower(), b.lower(), autojunk=False)
    m = sum(x.size for x in sm.get_matching_blocks())
    out.append({"a": a, "b": b, "matches": m, "length": len(a.lower()) + len(b.lower()), "ratio": sm.ratio()})
json.dump(out, open("crates/core/tests/fixtures/gestalt_reference.json", "w"), indent=1, ensure_ascii=False)
print(len(out))
