#!/usr/bin/env python3
"""Regenerates the toy KBs, classifier training sets, benchmark questions
and exemplar scripts under data/. Exemplar observations are recorded
afterwards by record_exemplars.sh, which runs the engine itself."""
import json
import random
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent
FB = "http://rdf.freebase.com/ns/"
WD = "http://www.example.org/wd/"
XSD = "http://www.w3.org/2001/XMLSchema#"


def lit(value, lang=None, dtype=None):
    s = json.dumps(value, ensure_ascii=False)
    if lang:
        return f"{s}@{lang}"
    if dtype:
        return f"{s}^^<{XSD}{dtype}>"
    return s


class Graph:
    def __init__(self, base):
        self.base = base
        self.lines = []

    def add(self, s, p, o):
        obj = o if o.startswith('"') else f"<{self.base}{o}>"
        self.lines.append(f"<{self.base}{s}> <{self.base}{p}> {obj} .")

    def write(self, path):
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(self.lines) + "\n", encoding="utf-8")


def tom_hanks_slice(g):
    g.add("m.th", "type.object.name", lit("Tom Hanks", "en"))
    g.add("m.th", "film.actor.film", "m.cvt1")
    g.add("m.cvt1", "film.performance.film", "m.nic")
    g.add("m.cvt1", "film.performance.character", "m.db")
    g.add("m.nic", "type.object.name", lit("Nothing in Common", "en"))
    g.add("m.db", "type.object.name", lit("David Basner", "en"))


def freebase_toy():
    g = Graph(FB)
    tom_hanks_slice(g)
    name = lambda n, s: g.add(n, "type.object.name", lit(s, "en"))
    typ = lambda n, t: g.add(n, "type.object.type", t)
    desc = lambda n, s: g.add(n, "common.topic.description", lit(s, "en"))

    for cls, label in [("film.film", "Film"), ("people.person", "Person"), ("location.country", "Country"),
                       ("location.citytown", "City/Town"), ("film.film_character", "Film character"),
                       ("finance.currency", "Currency"), ("architecture.structure", "Structure")]:
        name(cls, label)

    name("m.rh", "Ron Howard")
    name("m.gm", "Garry Marshall")
    for p in ("m.th", "m.rh", "m.gm"):
        typ(p, "people.person")
    desc("m.th", "American actor and filmmaker")
    desc("m.rh", "American director and actor")
    desc("m.gm", "American film director")

    films = {
        "m.nic": ("Nothing in Common", "1986-07-11", "m.gm"),
        "m.a13": ("Apollo 13", "1995-06-30", "m.rh"),
        "m.spl": ("Splash", "1984-03-09", "m.rh"),
        "m.abm": ("A Beautiful Mind", "2001-12-21", "m.rh"),
        "m.pw": ("Pretty Woman", "1990-03-23", "m.gm"),
    }
    for f, (title, date, director) in films.items():
        if f != "m.nic":
            name(f, title)
        typ(f, "film.film")
        g.add(f, "film.film.initial_release_date", lit(date, dtype="date"))
        g.add(f, "film.film.directed_by", director)

    for cvt, film, char, char_name in [("m.cvt2", "m.a13", "m.jl", "Jim Lovell"),
                                       ("m.cvt3", "m.spl", "m.ab", "Allen Bauer")]:
        g.add("m.th", "film.actor.film", cvt)
        g.add(cvt, "film.performance.film", film)
        g.add(cvt, "film.performance.character", char)
        name(char, char_name)
    for c in ("m.db", "m.jl", "m.ab"):
        typ(c, "film.film_character")

    countries = {
        "m.fr": ("France", 67750000, "m.eur", "m.paris"),
        "m.de": ("Germany", 83200000, "m.eur", "m.berlin"),
        "m.es": ("Spain", 47400000, "m.eur", "m.madrid"),
        "m.be": ("Belgium", 11600000, "m.eur", "m.brussels"),
        "m.ch": ("Switzerland", 8700000, "m.chf", "m.bern"),
        "m.it": ("Italy", 59100000, "m.eur", "m.rome"),
    }
    capitals = {"m.paris": "Paris", "m.berlin": "Berlin", "m.madrid": "Madrid", "m.brussels": "Brussels",
                "m.bern": "Bern", "m.rome": "Rome"}
    for c, (n, pop, cur, cap) in countries.items():
        name(c, n)
        typ(c, "location.country")
        g.add(c, "location.statistical_region.population", lit(str(pop), dtype="integer"))
        g.add(c, "location.country.currency_used", cur)
        g.add(c, "location.country.capital", cap)
        g.add(cap, "location.location.containedby", c)
    for cap, n in capitals.items():
        name(cap, n)
        typ(cap, "location.citytown")
    name("m.eur", "Euro")
    name("m.chf", "Swiss franc")
    typ("m.eur", "finance.currency")
    typ("m.chf", "finance.currency")

    borders = [("m.fr", "m.de"), ("m.fr", "m.es"), ("m.fr", "m.be"), ("m.fr", "m.ch"), ("m.fr", "m.it"),
               ("m.de", "m.be"), ("m.de", "m.ch"), ("m.ch", "m.it")]
    k = 0
    for a, b in borders:
        for x, y in ((a, b), (b, a)):
            k += 1
            cvt = f"m.adj{k}"
            g.add(x, "location.location.adjoin_s", cvt)
            g.add(cvt, "location.adjoining_relationship.adjoins", y)

    name("m.et", "Eiffel Tower")
    typ("m.et", "architecture.structure")
    desc("m.et", "Wrought-iron lattice tower in Paris")
    g.add("m.et", "location.location.containedby", "m.paris")
    g.add("m.et", "location.location.containedby", "m.fr")
    return g


def wikidata_toy():
    g = Graph(WD)
    label = lambda n, s: g.add(n, "label", lit(s, "en"))
    inst = lambda n, t: g.add(n, "instance_of", t)
    desc = lambda n, s: g.add(n, "description", lit(s, "en"))
    for cls, s in [("Q5", "human"), ("Q11424", "film"), ("Q6256", "country"), ("Q4164871", "position"),
                   ("Q43702", "international organization")]:
        label(cls, s)

    label("Q8877", "Steven Spielberg")
    label("Q25191", "Christopher Nolan")
    for p in ("Q8877", "Q25191"):
        inst(p, "Q5")
    desc("Q8877", "American filmmaker")
    desc("Q25191", "British-American filmmaker")
    films = [("Q189875", "Jaws", 124, "1975", "Q8877"),
             ("Q11621", "E.T. the Extra-Terrestrial", 115, "1982", "Q8877"),
             ("Q167726", "Jurassic Park", 127, "1993", "Q8877"),
             ("Q483941", "Schindler's List", 195, "1993", "Q8877"),
             ("Q165817", "Saving Private Ryan", 169, "1998", "Q8877"),
             ("Q25188", "Inception", 148, "2010", "Q25191"),
             ("Q13417189", "Interstellar", 169, "2014", "Q25191"),
             ("Q21664088", "Dunkirk", 106, "2017", "Q25191")]
    for q, title, minutes, year, director in films:
        label(q, title)
        inst(q, "Q11424")
        g.add(q, "director", director)
        g.add(q, "duration", lit(str(minutes), dtype="integer"))
        g.add(q, "publication_date", lit(year, dtype="gYear"))

    label("Q458", "European Union")
    inst("Q458", "Q43702")
    countries = [("Q142", "France"), ("Q183", "Germany"), ("Q31", "Belgium"), ("Q38", "Italy"), ("Q29", "Spain"),
                 ("Q55", "Netherlands"), ("Q39", "Switzerland")]
    for q, n in countries:
        label(q, n)
        inst(q, "Q6256")
        if q != "Q39":
            g.add(q, "member_of", "Q458")

    label("Q567", "Angela Merkel")
    label("Q61053", "Olaf Scholz")
    for p in ("Q567", "Q61053"):
        inst(p, "Q5")
    desc("Q567", "Chancellor of Germany from 2005 to 2021")
    desc("Q61053", "Chancellor of Germany since 2021")
    label("Q4970706", "Chancellor of Germany")
    label("Q1571212", "Federal Minister for the Environment")
    for p in ("Q4970706", "Q1571212"):
        inst(p, "Q4164871")
    statements = [("Q567-P39-1", "Q567", "Q4970706", "2005-11-22", "2021-12-08"),
                  ("Q567-P39-2", "Q567", "Q1571212", "1994-11-17", "1998-10-26"),
                  ("Q61053-P39-1", "Q61053", "Q4970706", "2021-12-08", None)]
    for st, person, position, start, end in statements:
        g.add(person, "p.position_held", st)
        g.add(st, "ps.position_held", position)
        g.add(st, "pq.start_time", lit(start, dtype="date"))
        if end:
            g.add(st, "pq.end_time", lit(end, dtype="date"))
    for st, country, pop, year in [("Q183-P1082-1", "Q183", 83200000, "2021"),
                                   ("Q183-P1082-2", "Q183", 80500000, "2013")]:
        g.add(country, "p.population", st)
        g.add(st, "ps.population", lit(str(pop), dtype="integer"))
        g.add(st, "pq.point_in_time", lit(year, dtype="gYear"))
    return g


def step(thought, action):
    return {"thought": thought, "action": action}


def call(name, *args, semantic=None):
    parts = [json.dumps(a, ensure_ascii=False) for a in args]
    if semantic is not None:
        parts.append("semantic=" + json.dumps(semantic, ensure_ascii=False))
    return f"{name}({', '.join(parts)})"


def sn(name):
    return call("SearchNodes", name)


def sgp(anchor, semantic):
    return call("SearchGraphPatterns", anchor, semantic=semantic)


def sparql(q):
    return call("ExecuteSPARQL", q)


def fb_anchor(name):
    return f'SELECT ?e WHERE {{ ?e type.object.name "{name}"@en . }}'


def wd_anchor(name):
    return f'SELECT ?e WHERE {{ ?e label "{name}"@en . }}'


DONE = lambda t: step(t, "Done")

# (id, dataset/label, question, gold, script)
BENCHMARK = [
    ("cwq-conj-1", "CWQ/Conjunction", "Which country borders France and uses the Euro?",
     ["Belgium", "Germany", "Italy", "Spain"], [
         step("I need to find France in the KB first.", sn("France")),
         step("Look for the border relation around France.", sgp(fb_anchor("France"), "borders adjoins")),
         step("Borders go through a CVT. Now combine it with the currency.",
              sparql('SELECT DISTINCT ?n WHERE { ?fr type.object.name "France"@en . ?fr location.location.adjoin_s ?a . '
                     '?a location.adjoining_relationship.adjoins ?c . ?c location.country.currency_used ?cur . '
                     '?cur type.object.name "Euro"@en . ?c type.object.name ?n . }')),
         DONE("The neighbours of France that use the Euro are listed."),
     ]),
    ("cwq-conj-2", "CWQ/Conjunction", "Which film starring Tom Hanks was directed by Ron Howard?",
     ["Apollo 13", "Splash"], [
         step("Find Tom Hanks.", sn("Tom Hanks")),
         step("Which predicate links him to his films?", sgp(fb_anchor("Tom Hanks"), "play in film")),
         step("Films go through performance CVTs. Add the director constraint.",
              sparql('SELECT DISTINCT ?n WHERE { ?th type.object.name "Tom Hanks"@en . ?th film.actor.film ?p . '
                     '?p film.performance.film ?f . ?f film.film.directed_by ?d . '
                     '?d type.object.name "Ron Howard"@en . ?f type.object.name ?n . }')),
         DONE("Both films are directed by Ron Howard."),
     ]),
    ("cwq-comp-1", "CWQ/Composition", "What currency is used in the country where the Eiffel Tower is located?",
     ["Euro"], [
         step("Find the Eiffel Tower.", sn("Eiffel Tower")),
         step("Where is it located?", sgp(fb_anchor("Eiffel Tower"), "located in")),
         step("Follow containedby to a country and read its currency.",
              sparql('SELECT DISTINCT ?n WHERE { ?t type.object.name "Eiffel Tower"@en . '
                     '?t location.location.containedby ?c . ?c location.country.currency_used ?cur . '
                     '?cur type.object.name ?n . }')),
         DONE("The currency is the Euro."),
     ]),
    ("cwq-comp-2", "CWQ/Composition", "Who directed the film in which Tom Hanks played David Basner?",
     ["Garry Marshall"], [
         step("Find the character David Basner.", sn("David Basner")),
         step("Which performance connects the character to a film?", sgp(fb_anchor("David Basner"), "character in film")),
         step("Go from the character to the film and then the director.",
              sparql('SELECT DISTINCT ?n WHERE { ?c type.object.name "David Basner"@en . '
                     '?p film.performance.character ?c . ?p film.performance.film ?f . '
                     '?f film.film.directed_by ?d . ?d type.object.name ?n . }')),
         DONE("Garry Marshall directed Nothing in Common."),
     ]),
    ("cwq-cmp-1", "CWQ/Comparative", "Which country bordering France has a population larger than 80 million?",
     ["Germany"], [
         step("Find France.", sn("France")),
         step("Look for a population predicate on countries.", sgp(fb_anchor("Germany"), "population")),
         step("Filter the neighbours of France by population.",
              sparql('SELECT DISTINCT ?n WHERE { ?fr type.object.name "France"@en . ?fr location.location.adjoin_s ?a . '
                     '?a location.adjoining_relationship.adjoins ?c . ?c location.statistical_region.population ?p . '
                     'FILTER(?p > 80000000) ?c type.object.name ?n . }')),
         DONE("Only Germany exceeds 80 million."),
     ]),
    ("cwq-cmp-2", "CWQ/Comparative", "Which film directed by Ron Howard was released after 1990?",
     ["Apollo 13", "A Beautiful Mind"], [
         step("Find Ron Howard.", sn("Ron Howard")),
         step("Which films point at him as director?", sgp(fb_anchor("Ron Howard"), "directed by")),
         step("Compare release dates.",
              sparql('SELECT DISTINCT ?n WHERE { ?d type.object.name "Ron Howard"@en . ?f film.film.directed_by ?d . '
                     '?f film.film.initial_release_date ?date . FILTER(?date > "1990-12-31"^^xsd:date) '
                     '?f type.object.name ?n . }')),
         DONE("Two of his films were released after 1990."),
     ]),
    ("cwq-sup-1", "CWQ/Superlative", "Which country bordering France has the largest population?",
     ["Germany"], [
         step("Find France.", sn("France")),
         step("Order the neighbours of France by population.",
              sparql('SELECT ?n WHERE { ?fr type.object.name "France"@en . ?fr location.location.adjoin_s ?a . '
                     '?a location.adjoining_relationship.adjoins ?c . ?c location.statistical_region.population ?p . '
                     '?c type.object.name ?n . } ORDER BY DESC(?p) LIMIT 1')),
         DONE("Germany is the most populous neighbour."),
     ]),
    ("cwq-sup-2", "CWQ/Superlative", "What is the earliest film Tom Hanks acted in?",
     ["Splash"], [
         step("Find Tom Hanks.", sn("Tom Hanks")),
         step("Find the film relation.", sgp(fb_anchor("Tom Hanks"), "play in film")),
         step("Sort his films by release date.",
              sparql('SELECT ?n WHERE { ?th type.object.name "Tom Hanks"@en . ?th film.actor.film ?p . '
                     '?p film.performance.film ?f . ?f film.film.initial_release_date ?d . '
                     '?f type.object.name ?n . } ORDER BY ASC(?d) LIMIT 1')),
         DONE("Splash is the earliest."),
     ]),
    ("kqa-ct-1", "KQAPro/Ct", "How many films did Steven Spielberg direct?", ["5"], [
        step("Find Steven Spielberg.", sn("Steven Spielberg")),
        step("Which predicate marks a director?", sgp(wd_anchor("Steven Spielberg"), "director of film")),
        step("Count the films.",
             sparql('SELECT (COUNT(DISTINCT ?f) AS ?c) WHERE { ?s label "Steven Spielberg"@en . ?f director ?s . }')),
        DONE("He directed 5 films in the KB."),
    ]),
    ("kqa-ct-2", "KQAPro/Ct", "How many countries are members of the European Union?", ["6"], [
        step("Find the European Union.", sn("European Union")),
        step("Which edges point at it?", sgp(wd_anchor("European Union"), "member of")),
        step("Count member countries.",
             sparql('SELECT (COUNT(DISTINCT ?c) AS ?n) WHERE { ?eu label "European Union"@en . ?c member_of ?eu . '
                    '?c instance_of ?k . ?k label "country"@en . }')),
        DONE("6 countries are members."),
    ]),
    ("kqa-sa-1", "KQAPro/SA", "Which film directed by Steven Spielberg has the longest duration?",
     ["Schindler's List"], [
        step("Find Steven Spielberg.", sn("Steven Spielberg")),
        step("Check what duration looks like on a film.", sgp(wd_anchor("Jaws"), "duration")),
        step("Order his films by duration.",
             sparql('SELECT ?n WHERE { ?s label "Steven Spielberg"@en . ?f director ?s . ?f duration ?d . '
                    '?f label ?n . } ORDER BY DESC(?d) LIMIT 1')),
        DONE("Schindler's List is the longest."),
    ]),
    ("kqa-qaq-1", "KQAPro/QAQ", "When did Angela Merkel start holding the position of Chancellor of Germany?",
     ["2005-11-22"], [
        step("Find Angela Merkel.", sn("Angela Merkel")),
        step("Look at her position statements.", sgp(wd_anchor("Angela Merkel"), "position held start time")),
        step("Read the start_time qualifier of the matching statement.",
             sparql('SELECT ?t WHERE { ?p label "Angela Merkel"@en . ?p p.position_held ?st . '
                    '?st ps.position_held ?pos . ?pos label "Chancellor of Germany"@en . ?st pq.start_time ?t . }')),
        DONE("She took office on 2005-11-22."),
    ]),
]

# (dataset, label, question, script). Two per type; WebQSP has four in total.
EXEMPLARS = [
    ("CWQ", "Conjunction", "Which country borders Germany and uses the Swiss franc?", [
        step("First find Germany.", sn("Germany")),
        step("Borders may be stored through a mediator node.", sgp(fb_anchor("Germany"), "borders")),
        step("Join the border CVT with the currency.",
             sparql('SELECT DISTINCT ?n WHERE { ?de type.object.name "Germany"@en . ?de location.location.adjoin_s ?a . '
                    '?a location.adjoining_relationship.adjoins ?c . ?c location.country.currency_used ?cur . '
                    '?cur type.object.name "Swiss franc"@en . ?c type.object.name ?n . }')),
        DONE("Switzerland satisfies both conditions."),
    ]),
    ("CWQ", "Conjunction", "Which film directed by Garry Marshall stars Tom Hanks?", [
        step("Find Tom Hanks.", sn("Tom Hanks")),
        step("Find how actors link to films.", sgp(fb_anchor("Tom Hanks"), "play in film")),
        step("Intersect his films with Garry Marshall's.",
             sparql('SELECT DISTINCT ?n WHERE { ?th type.object.name "Tom Hanks"@en . ?th film.actor.film ?p . '
                    '?p film.performance.film ?f . ?f film.film.directed_by ?d . '
                    '?d type.object.name "Garry Marshall"@en . ?f type.object.name ?n . }')),
        DONE("Nothing in Common is the answer."),
    ]),
    ("CWQ", "Composition", "What is the capital of the country where the Eiffel Tower is located?", [
        step("Find the Eiffel Tower.", sn("Eiffel Tower")),
        step("Where is it located?", sgp(fb_anchor("Eiffel Tower"), "located in")),
        step("Go to the country and then its capital.",
             sparql('SELECT DISTINCT ?n WHERE { ?t type.object.name "Eiffel Tower"@en . '
                    '?t location.location.containedby ?c . ?c location.country.capital ?cap . '
                    '?cap type.object.name ?n . }')),
        DONE("The capital is Paris."),
    ]),
    ("CWQ", "Composition", "Who directed the film in which Tom Hanks played Jim Lovell?", [
        step("Find Jim Lovell.", sn("Jim Lovell")),
        step("How is the character linked to a film?", sgp(fb_anchor("Jim Lovell"), "character in film")),
        step("Character, performance, film, director.",
             sparql('SELECT DISTINCT ?n WHERE { ?c type.object.name "Jim Lovell"@en . '
                    '?p film.performance.character ?c . ?p film.performance.film ?f . '
                    '?f film.film.directed_by ?d . ?d type.object.name ?n . }')),
        DONE("Ron Howard directed Apollo 13."),
    ]),
    ("CWQ", "Comparative", "Which country bordering Germany has a population smaller than 20 million?", [
        step("Find Germany.", sn("Germany")),
        step("Find the population predicate.", sgp(fb_anchor("Germany"), "population")),
        step("Filter Germany's neighbours.",
             sparql('SELECT DISTINCT ?n WHERE { ?de type.object.name "Germany"@en . ?de location.location.adjoin_s ?a . '
                    '?a location.adjoining_relationship.adjoins ?c . ?c location.statistical_region.population ?p . '
                    'FILTER(?p < 20000000) ?c type.object.name ?n . }')),
        DONE("Belgium and Switzerland are below 20 million."),
    ]),
    ("CWQ", "Comparative", "Which Garry Marshall film was released before 1988?", [
        step("Find Garry Marshall.", sn("Garry Marshall")),
        step("Which films name him as director?", sgp(fb_anchor("Garry Marshall"), "directed by")),
        step("Compare the release dates.",
             sparql('SELECT DISTINCT ?n WHERE { ?d type.object.name "Garry Marshall"@en . ?f film.film.directed_by ?d . '
                    '?f film.film.initial_release_date ?date . FILTER(?date < "1988-01-01"^^xsd:date) '
                    '?f type.object.name ?n . }')),
        DONE("Only Nothing in Common was released before 1988."),
    ]),
    ("CWQ", "Superlative", "Which country bordering Germany has the smallest population?", [
        step("Find Germany.", sn("Germany")),
        step("Rank the neighbours by population, ascending.",
             sparql('SELECT ?n WHERE { ?de type.object.name "Germany"@en . ?de location.location.adjoin_s ?a . '
                    '?a location.adjoining_relationship.adjoins ?c . ?c location.statistical_region.population ?p . '
                    '?c type.object.name ?n . } ORDER BY ASC(?p) LIMIT 1')),
        DONE("Switzerland has the smallest population."),
    ]),
    ("CWQ", "Superlative", "What is the most recent film directed by Garry Marshall?", [
        step("Find Garry Marshall.", sn("Garry Marshall")),
        step("Find the director and date predicates.", sgp(fb_anchor("Garry Marshall"), "directed by")),
        step("Sort his films by release date, newest first.",
             sparql('SELECT ?n WHERE { ?d type.object.name "Garry Marshall"@en . ?f film.film.directed_by ?d . '
                    '?f film.film.initial_release_date ?date . ?f type.object.name ?n . } '
                    'ORDER BY DESC(?date) LIMIT 1')),
        DONE("Pretty Woman is the most recent."),
    ]),
    ("WebQSP", "1-hop", "What currency does Switzerland use?", [
        step("Find Switzerland.", sn("Switzerland")),
        step("Look for a currency predicate.", sgp(fb_anchor("Switzerland"), "currency")),
        step("Read it.",
             sparql('SELECT ?n WHERE { ?c type.object.name "Switzerland"@en . ?c location.country.currency_used ?x . '
                    '?x type.object.name ?n . }')),
        DONE("Switzerland uses the Swiss franc."),
    ]),
    ("WebQSP", "1-hop", "Who directed Splash?", [
        step("Find the film Splash.", sn("Splash")),
        step("Look for the director predicate.", sgp(fb_anchor("Splash"), "directed by")),
        step("Read the director.",
             sparql('SELECT ?n WHERE { ?f type.object.name "Splash"@en . ?f film.film.directed_by ?d . '
                    '?d type.object.name ?n . }')),
        DONE("Ron Howard directed Splash."),
    ]),
    ("WebQSP", "2-hop", "Which character did Tom Hanks play in Apollo 13?", [
        step("Find Tom Hanks.", sn("Tom Hanks")),
        step("Performances are CVTs; find the character path.", sgp(fb_anchor("Tom Hanks"), "character role")),
        step("Fix the film and read the character.",
             sparql('SELECT ?n WHERE { ?th type.object.name "Tom Hanks"@en . ?th film.actor.film ?p . '
                    '?p film.performance.film ?f . ?f type.object.name "Apollo 13"@en . '
                    '?p film.performance.character ?c . ?c type.object.name ?n . }')),
        DONE("He played Jim Lovell."),
    ]),
    ("WebQSP", "2-hop", "Which actor played David Basner?", [
        step("Find the character.", sn("David Basner")),
        step("Incoming performance edges lead to the actor.", sgp(fb_anchor("David Basner"), "actor played character")),
        step("Walk back through the performance.",
             sparql('SELECT ?n WHERE { ?c type.object.name "David Basner"@en . ?p film.performance.character ?c . '
                    '?a film.actor.film ?p . ?a type.object.name ?n . }')),
        DONE("Tom Hanks played David Basner."),
    ]),
    ("KQAPro", "Ct", "How many films did Christopher Nolan direct?", [
        step("Find Christopher Nolan.", sn("Christopher Nolan")),
        step("Find the director predicate.", sgp(wd_anchor("Christopher Nolan"), "director")),
        step("Count his films.",
             sparql('SELECT (COUNT(DISTINCT ?f) AS ?c) WHERE { ?s label "Christopher Nolan"@en . ?f director ?s . }')),
        DONE("He directed 3 films."),
    ]),
    ("KQAPro", "Ct", "How many films directed by Steven Spielberg were published after 1990?", [
        step("Find Steven Spielberg.", sn("Steven Spielberg")),
        step("Check the date predicate on one of his films.", sgp(wd_anchor("Jaws"), "publication date")),
        step("Count with a year filter.",
             sparql('SELECT (COUNT(DISTINCT ?f) AS ?c) WHERE { ?s label "Steven Spielberg"@en . ?f director ?s . '
                    '?f publication_date ?y . FILTER(?y > 1990) }')),
        DONE("3 films."),
    ]),
    ("KQAPro", "SA", "Which film directed by Christopher Nolan has the shortest duration?", [
        step("Find Christopher Nolan.", sn("Christopher Nolan")),
        step("Sort his films by duration.",
             sparql('SELECT ?n WHERE { ?s label "Christopher Nolan"@en . ?f director ?s . ?f duration ?d . '
                    '?f label ?n . } ORDER BY ASC(?d) LIMIT 1')),
        DONE("Dunkirk is the shortest."),
    ]),
    ("KQAPro", "SA", "Which film directed by Steven Spielberg was published first?", [
        step("Find Steven Spielberg.", sn("Steven Spielberg")),
        step("Sort by publication date.",
             sparql('SELECT ?n WHERE { ?s label "Steven Spielberg"@en . ?f director ?s . ?f publication_date ?y . '
                    '?f label ?n . } ORDER BY ASC(?y) LIMIT 1')),
        DONE("Jaws came first."),
    ]),
    ("KQAPro", "QAQ", "When did Olaf Scholz start holding the position of Chancellor of Germany?", [
        step("Find Olaf Scholz.", sn("Olaf Scholz")),
        step("Positions are statement nodes with qualifiers.", sgp(wd_anchor("Olaf Scholz"), "position held start time")),
        step("Read the start_time qualifier.",
             sparql('SELECT ?t WHERE { ?p label "Olaf Scholz"@en . ?p p.position_held ?st . '
                    '?st ps.position_held ?pos . ?pos label "Chancellor of Germany"@en . ?st pq.start_time ?t . }')),
        DONE("2021-12-08."),
    ]),
    ("KQAPro", "QAQ", "When did Angela Merkel stop being Federal Minister for the Environment?", [
        step("Find Angela Merkel.", sn("Angela Merkel")),
        step("Look at her position statements.", sgp(wd_anchor("Angela Merkel"), "position held end time")),
        step("Read the end_time qualifier.",
             sparql('SELECT ?t WHERE { ?p label "Angela Merkel"@en . ?p p.position_held ?st . '
                    '?st ps.position_held ?pos . ?pos label "Federal Minister for the Environment"@en . '
                    '?st pq.end_time ?t . }')),
        DONE("1998-10-26."),
    ]),
]


def cwq_classifier_rows(rng):
    people = ["Tom Hanks", "Meryl Streep", "Barack Obama", "Marie Curie", "Lionel Messi", "Taylor Swift",
              "Albert Einstein", "Serena Williams", "Frida Kahlo", "Nelson Mandela"]
    places = ["France", "Japan", "Brazil", "Canada", "Kenya", "Peru", "Norway", "India", "Egypt", "Chile"]
    things = ["river", "mountain", "university", "stadium", "airport", "lake", "museum", "city", "team", "band"]
    templates = {
        "Conjunction": [
            "Which {t} is in {p} and was founded by {x}?",
            "What movie stars {x} and was filmed in {p}?",
            "Which country borders {p} and has {x} as a citizen?",
            "What {t} is located in {p} and named after {x}?",
            "Which film features {x} and was released in {p}?",
        ],
        "Composition": [
            "What is the capital of the country where {x} was born?",
            "What language is spoken in the country that contains the {t} of {p}?",
            "Who founded the {t} that {x} attended?",
            "What currency is used where {x} grew up?",
            "Which team plays in the {t} located in the hometown of {x}?",
        ],
        "Comparative": [
            "Which {t} in {p} is larger than 500 square kilometers?",
            "What country near {p} has a population greater than 10 million?",
            "Which film by {x} was released after 1995?",
            "Which {t} in {p} opened earlier than 1900?",
            "What {t} has more than 20000 seats in {p}?",
        ],
        "Superlative": [
            "What is the largest {t} in {p}?",
            "Which is the most recent film starring {x}?",
            "What is the tallest {t} in {p}?",
            "Which {t} in {p} has the most visitors?",
            "What was the earliest album released by {x}?",
        ],
    }
    rows = []
    for label, temps in templates.items():
        for i in range(50):
            t = temps[i % len(temps)]
            rows.append({"question": t.format(x=rng.choice(people), p=rng.choice(places), t=rng.choice(things)),
                         "label": label})
    return rows


def kqa_classifier_rows(rng):
    people = ["Steven Spielberg", "Christopher Nolan", "Angela Merkel", "Olaf Scholz", "Ada Lovelace"]
    orgs = ["European Union", "United Nations", "NATO", "the Olympic Committee"]
    templates = {
        "Ct": ["How many films did {x} direct?", "How many countries are members of {o}?",
               "How many works by {x} were published after 1990?", "How many members does {o} have?"],
        "SA": ["Which film directed by {x} has the longest duration?", "Which member of {o} has the largest area?",
               "Which work by {x} was published first?", "Which film by {x} is the shortest?"],
        "QAQ": ["When did {x} start holding the position of chair of {o}?",
                "When did {x} stop being a member of {o}?",
                "In what year did {x} begin the role at {o}?",
                "When did {x} hold the office in {o} until?"],
    }
    rows = []
    for label, temps in templates.items():
        for i in range(20):
            rows.append({"question": temps[i % len(temps)].format(x=rng.choice(people), o=rng.choice(orgs)),
                         "label": label})
    return rows


def write_jsonl(path, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


def main():
    rng = random.Random(20240101)
    g = Graph(FB)
    tom_hanks_slice(g)
    g.write(DATA / "kb" / "tom_hanks.nt")
    freebase_toy().write(DATA / "kb" / "freebase_toy.nt")
    wikidata_toy().write(DATA / "kb" / "wikidata_toy.nt")

    write_jsonl(DATA / "classifier" / "CWQ.jsonl", cwq_classifier_rows(rng))
    write_jsonl(DATA / "classifier" / "KQAPro.jsonl", kqa_classifier_rows(rng))

    write_jsonl(DATA / "questions" / "toy12.jsonl",
                [{"id": i, "question": q, "type": t, "goldAnswers": gold, "script": s}
                 for i, t, q, gold, s in BENCHMARK])

    scripts = DATA / "exemplars" / "scripts"
    scripts.mkdir(parents=True, exist_ok=True)
    index = []
    counts = {}
    for dataset, label, question, script in EXEMPLARS:
        counts[(dataset, label)] = counts.get((dataset, label), 0) + 1
        name = f"{dataset}-{label}-{counts[(dataset, label)]}.json"
        (scripts / name).write_text(json.dumps(script, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")
        index.append({"dataset": dataset, "label": label, "question": question, "script": name})
    write_jsonl(scripts / "index.jsonl", index)


if __name__ == "__main__":
    main()
