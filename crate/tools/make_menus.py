# Writes the bundled menu fixtures (original menu and generated candidates).
import json

def r(i, title, desc, ingr, origin, veg, vegan):
    return dict(id=i, title=title, description=desc, ingredients=ingr,
                origin=origin, vegetarian=veg, vegan=vegan)

O = "original"
orig = [
 r("o01","Chicken Curry Ramen","Japanese fried chicken & noodles in a delicious curry broth.",["chicken","noodles","curry broth"],O,False,False),
 r("o02","Pork Ribs","Pork Ribs smothered with Kentucky style BBQ sauce.",["pork","bbq sauce"],O,False,False),
 r("o03","Beef Bourguignon","6oz Black Angus beef burger topped with crispy bacon, red wine braised onions, Raclette cheese.",["beef","burger bun","bacon","red wine","onions","raclette cheese"],O,False,False),
 r("o04","Chicken Katsu Curry","Succulent chicken in a crispy Japanese panko crumb with mild curry sauce, pickles and steamed rice.",["chicken","panko","curry sauce","pickles","rice"],O,False,False),
 r("o05","Pepperoni Melt","This one’s got our triple cheese blend, tomato sauce and pepperoni.",["pepperoni","cheese","tomato sauce"],O,False,False),
 r("o06","Lamb Meatballs with Spaghetti","Handmade lamb patties grilled and topped with Greek yoghurt, tomato sauce, and onions.",["lamb","spaghetti","greek yoghurt","tomato sauce","onions"],O,False,False),
 r("o07","Aromatic Duck Rolls","Aromatic roast duck, hoisin sauce, cucumber, spring onion, rolled in rice paper.",["duck","hoisin sauce","cucumber","spring onion","rice paper"],O,False,False),
 r("o08","Slow Cooked Beef in Chianti Sauce","Beef shin and shallots slow cooked in rich Chianti red wine sauce with a cheesy dumpling.",["beef","shallots","red wine","dumpling","cheese"],O,False,False),
 r("o09","Pork Porchetta","Slow-roasted pork belly in herbed red wine sauce, served with roasted new potatoes and broccoli.",["pork","red wine","new potatoes","broccoli"],O,False,False),
 r("o10","Cured Salmon Sashimi","Dazzling beetroot cured slices of salmon served with lemon.",["salmon","beetroot","lemon"],O,False,False),
 r("o11","Beef Brisket and Venison Tagliatelle","A beef, brisket, venison, red wine and beef dripping ragu with tagliatelle, fresh bufala mozzarella and crispy sage.",["beef","venison","red wine","tagliatelle","buffalo mozzarella","sage"],O,False,False),
 r("o12","Rustica Chorizo Pizza","Chorizo salami, torn wild boar and pork meatballs, smoked mozzarella and baby sunblush tomatoes.",["chorizo","wild boar","pork","mozzarella","tomatoes","pizza dough"],O,False,False),
 r("o13","Butterfly Chicken Burger","Two succulent chicken breasts joined by crispy skin, packaged in a Portuguese roll and topped with tomato and lettuce.",["chicken","portuguese roll","tomato","lettuce"],O,False,False),
 r("o14","American Hot Pizza","Pepperoni, mozzarella and tomato, with your choice of hot green, Roquito or jalapeno peppers.",["pepperoni","mozzarella","tomato sauce","peppers","pizza dough"],O,False,False),
 r("o15","Beef Angus Burger","6oz beef burger with baby gem lettuce and plum tomato in a chargrilled brioche bun with Dijon mayonnaise.",["beef","lettuce","tomato","brioche bun","dijon mayonnaise"],O,False,False),
 r("o16","Beer Battered Fish with Chips","with frites and pea & mint puree.",["fish","beer batter","chips","peas","mint"],O,False,False),
 r("o17","Wild Boar Polpette","Oven-baked herby wild boar and pork meatballs in a pomodoro sauce with melted smoked mozzarella.",["wild boar","pork","tomato sauce","mozzarella"],O,False,False),
 r("o18","Steak","Sliced Black Angus rump steak with red onion chutney, watercress, and Dijon mayonnaise.",["beef","red onion chutney","watercress","dijon mayonnaise"],O,False,False),
 r("o19","Canelloni","pasta with béchamel, mozzarella and Gran Milano cheese.",["pasta","bechamel","mozzarella","cheese"],O,True,False),
 r("o20","Supreme Pizza","Cheese and tomato, onion, mushroom, fresh basil, olive and garlic oil.",["pizza dough","cheese","tomato","onions","mushrooms","basil","garlic oil"],O,True,False),
 r("o21","Goat's Cheese Calzone","Goats cheese, grilled aubergines, roasted peppers, oven roasted tomatoes.",["goat's cheese","aubergine","peppers","tomatoes","pizza dough"],O,True,False),
 r("o22","Vegan Spaghetti Lentil Ragu","A hearty ragu of green lentils and mixed vegetables in a rich tomato and fennel sauce.",["lentils","spaghetti","mixed vegetables","tomato sauce","fennel"],O,True,True),
 r("o23","Jack Fruit Arrabiata","Vegan jackfruit peppers, spicy harissa, roquito chilis & vegan Mozzarella cheese, finished with basil.",["jackfruit","peppers","harissa","vegan mozzarella","basil"],O,True,True),
 r("o24","Halloumi Sticks with Mayo Avocado Dip","Chunky sticks of grilled halloumi cheese with a chilli jam and mayo avocado dip.",["halloumi","chilli jam","avocado","mayonnaise"],O,True,False),
 r("o25","Cheese Salad","Smoked cheddar, cheddar and sage stuffing.",["cheddar","sage stuffing"],O,True,False),
 r("o26","Falafel with Tahini","Our signature recipe, served with a tahini dip.",["chickpeas","tahini"],O,True,True),
 r("o27","Four Cheese Margherita","Mozzarella, mascarpone, fontal and grana cheese on a tomato base.",["pizza dough","mozzarella","mascarpone","fontal","grana","tomato sauce"],O,True,False),
 r("o28","Vegan Meatballs","Vegan meatballs in a rich tomato and fennel sauce.",["vegan meatballs","tomato sauce","fennel"],O,True,True),
 r("o29","Bufala Caprese","Specialty tomatoes and drizzle of roasted garlic in extra virgin olive oil with Buffalo mozzarella.",["tomatoes","buffalo mozzarella","garlic","olive oil"],O,True,False),
 r("o30","Butternut Squash Salad","Roasted butternut squash with feta cheese, pomegranate seeds, mixed leaf salad and watercress.",["butternut squash","feta","pomegranate","mixed leaves","watercress"],O,True,False),
 r("o31","Panchetta Carbonara","crispy pancetta and asparagus in a velvety sauce made with mascarpone, pecorino and Grana Padano cheese.",["pancetta","pasta","asparagus","mascarpone","pecorino","grana padano"],O,False,False),
 r("o32","Lentil Linguine Ragu","Rich Italian lentil ragu with baby spinach, tomatoes, basil & pecorino cheese.",["lentils","linguine","spinach","tomatoes","basil","pecorino"],O,True,False),
 r("o33","Aegean Slaw","Thinly shredded cabbage, carrot and red onion peppers, with an olive oil dressing.",["cabbage","carrot","red onion","peppers","olive oil"],O,True,True),
 r("o34","Goat's Cheese Salad","Goat's cheese and balsamic onion crostinis on winter baby kale, red pepper, cucumber, plum tomatoes.",["goat's cheese","onions","crostini","kale","peppers","cucumber","tomatoes"],O,True,False),
 r("o35","Harusami Aubergine","Fried slices of aubergine with garlic & ginger sesame soy.",["aubergine","garlic","ginger","sesame soy"],O,True,True),
 r("o36","Inari Taco","Golden tofu pockets filled with sticky sushi rice, avocado salsa & vegan sriracha mayo.",["tofu","sushi rice","avocado","sriracha mayo"],O,True,True),
]

G = "generated"
gen = [
 r("g01","Creamy Mushroom Tagliatelle","An indulgent pasta dish featuring sautéed mushrooms and baby spinach in a creamy mascarpone sauce, tossed with tagliatelle and seasoned with garlic oil and fresh basil.",["mushrooms","tagliatelle","spinach","mascarpone","garlic oil","basil"],G,True,False),
 r("g02","Vegetable Delight Pizza","A delicious crispy pizza topped with mozzarella, tomato sauce, and a medley of grilled vegetables, finished with fresh basil.",["pizza dough","mozzarella","tomato sauce","aubergine","peppers","basil"],G,True,False),
 r("g03","Three Cheese Omelette","A fluffy omelette loaded with smoked cheddar, mozzarella, grana cheese, and sautéed red onions.",["eggs","cheddar","mozzarella","grana","red onion"],G,True,False),
 r("g04","Eggplant Parmesan","Layers of tender aubergine baked with rich tomato sauce, melted mozzarella, and Grana Padano cheese, garnished with fresh basil.",["aubergine","tomato sauce","mozzarella","grana padano","basil"],G,True,False),
 r("g05","Mushroom and Goat's Cheese Omelette","A fluffy omelette filled with sautéed mushrooms and creamy goat's cheese, infused with garlic oil and fresh basil.",["eggs","mushrooms","goat's cheese","garlic oil","basil"],G,True,False),
 r("g06","Chickpea Curry with Rice","A flavorful and hearty chickpea curry served with steamed rice and accompanied by tangy pickles.",["chickpeas","curry sauce","rice","pickles"],G,True,True),
 r("g07","Spinach and Feta Stuffed Mushrooms","Large mushrooms stuffed with sautéed baby spinach and creamy feta cheese, drizzled with garlic oil and baked to perfection.",["mushrooms","spinach","feta","garlic oil"],G,True,False),
 r("g08","Lentil Veggie Burger","A hearty lentil-based veggie burger served on a toasted brioche bun with fresh lettuce, tomato, and tangy Dijon mayonnaise.",["lentils","brioche bun","lettuce","tomato","dijon mayonnaise"],G,True,False),
 r("g09","Falafel Salad","Our signature falafel served over a fresh mixed salad, with crunchy cucumbers, juicy tomatoes, red onions, and a creamy tahini dressing.",["chickpeas","mixed leaves","cucumber","tomatoes","red onion","tahini"],G,True,True),
 r("g10","Egg Shakshuka","Poached eggs simmered in a spiced tomato sauce with peppers and onions, garnished with fresh basil.",["eggs","tomato sauce","peppers","onions","basil"],G,True,False),
 r("g11","Vegetable and Tofu Stir-Fry","A vibrant stir-fry of crispy tofu and fresh vegetables tossed with noodles in a savory garlic and ginger sesame soy sauce.",["tofu","noodles","mixed vegetables","garlic","ginger","sesame soy"],G,True,True),
 r("g12","Tofu Katsu Curry","Succulent tofu coated in crispy panko crumbs, served with mild curry sauce, tangy pickles, and steamed rice.",["tofu","panko","curry sauce","pickles","rice"],G,True,True),
 r("g13","Lentil Stuffed Peppers","Roasted bell peppers stuffed with hearty lentils, tomato sauce, and fresh baby spinach, topped with creamy goat's cheese.",["lentils","peppers","tomato sauce","spinach","goat's cheese"],G,True,False),
 r("g14","Butternut Squash and Feta Salad","Sweet roasted butternut squash and tangy feta cheese on a bed of fresh mixed greens, sprinkled with pomegranate seeds and watercress.",["butternut squash","feta","mixed leaves","pomegranate","watercress"],G,True,False),
 r("g15","Vegan Meatball Sub","Hearty vegan meatballs simmered in pomodoro sauce, topped with melted smoked mozzarella, served in a toasted Portuguese roll.",["vegan meatballs","tomato sauce","mozzarella","portuguese roll"],G,True,False),
 r("g16","Chickpea and Spinach Curry","A nourishing curry of chickpeas and baby spinach simmered in a mild curry sauce, served with steamed rice.",["chickpeas","spinach","curry sauce","rice"],G,True,True),
 r("g17","Tofu Curry Ramen","Japanese-style ramen with fried tofu and noodles in a delicious curry broth, topped with spring onion and pickles.",["tofu","noodles","curry broth","spring onion","pickles"],G,True,True),
 r("g18","Mushroom and Lentil Bolognese","Hearty mushrooms and lentils cooked in a rich tomato sauce, served over tagliatelle pasta and garnished with fresh basil.",["mushrooms","lentils","tomato sauce","tagliatelle","basil"],G,True,True),
 r("g19","Mushroom Bourguignon","Enjoy the rich flavors of our classic Beef Bourguignon with a meat-free twist.",["mushrooms","red wine","onions","shallots","new potatoes"],G,True,True),
 r("g20","Lentil Meatballs with Spaghetti","Enjoy this lighter version of our Lamb Meatballs with Spaghetti.",["lentils","spaghetti","tomato sauce","onions","greek yoghurt"],G,True,False),
]
assert len(orig) == 36 and sum(x["vegetarian"] for x in orig) == 17
assert len(gen) == 20
allowed = {i for x in orig for i in x["ingredients"]} | {"tofu","lentils","mushrooms","chickpeas","eggs","cheese"}
for g in gen:
    bad = [i for i in g["ingredients"] if i not in allowed]
    assert not bad, (g["title"], bad)
with open("crates/core/data/original_menu.json","w") as f:
    json.dump(orig, f, indent=2, ensure_ascii=False); f.write("\n")
with open("crates/core/data/generated_recipes.json","w") as f:
    json.dump(gen, f, indent=2, ensure_ascii=False); f.write("\n")
