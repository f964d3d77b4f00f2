#!/usr/bin/env python3
"""Generate the synthetic labelled corpus shipped in data/corpus.

Writes, from a fixed seed:
  synthetic_labelled.csv   id,text,label,hashtags   (label 1 = rescue request)
  synthetic_tweets.ndjson  the same tweets as streaming-API style records
  gazetteer.tsv            completed address -> lon, lat, precision
  expected_ungeocoded.txt  completed addresses deliberately left out of the gazetteer

Each row comes from one template family (see FAMILIES below and README.md).
The completed search string for every address is built here from the
components the template emitted, following the completion rules:
  - no city/state/zip: append ", Houston, TX" when a hashtag contains
    "houston", otherwise ", Texas";
  - some locality present: keep if it mentions Texas/TX, else append ", Texas".
That is an independent construction from the C++ extractor, so a gazetteer
miss in the pipeline (other than the listed omissions) signals a bug.

Usage: tools/gen_synthetic_corpus.py [output_dir]
"""

import csv
import json
import random
import re
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

SEED = 2017
OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "corpus"

rng = random.Random(SEED)

STREET_NAMES = [
    "Braeswood", "Gessner", "Westheimer", "Bellaire", "Kirby", "Shepherd", "Memorial",
    "Bissonnet", "Fondren", "Hillcroft", "Beechnut", "Bellfort", "Airline", "Aldine",
    "Tidwell", "Wilcrest", "Telephone", "Cypress Creek", "Dairy Ashford", "Meyerland",
    "Chimney Rock", "Stella Link", "Buffalo Speedway", "Fuqua", "Almeda", "Cullen",
]
SUFFIXES = ["Blvd", "Boulevard", "Dr", "Drive", "St", "Street", "Rd", "Road", "Ln", "Lane",
            "Ave", "Ct", "Way", "Pkwy", "Trail", "Cir", "Pl"]
DIRECTIONS = ["", "", "", "North", "South", "East", "West", "N.", "S."]
DESIGNATOR_FORMS = ["Highway {n}", "Hwy {n}", "Ave. {l}", "Avenue {l}", "Road {n}", "Route {n}",
                    "Rte {n}", "St. {l}"]
HOUSTON_TAGS = ["#houstonflood", "#HoustonFlooding", "#houstonstrong", "#HoustonRescue"]
OTHER_TAGS = ["#Harvey", "#HurricaneHarvey", "#harveyflood", "#TexasFlood"]
HELP = ["Please help", "please help!", "Need to be rescued", "need rescue", "SOS", "Send help",
        "#HarveyRescue", "#FloodRescue", "need help", "Help us"]
SITUATION = ["we are stranded", "trapped in the attic", "stuck on the roof", "family stranded",
             "water rising, we are trapped", "elderly couple stuck", "on the rooftop now"]
CITIES_TX = [("Houston", "TX"), ("Houston", "Texas"), ("Pasadena", "TX"), ("Katy", "TX"),
             ("Dickinson", "TX"), ("Friendswood", "TX"), ("Bay City", "TX"), ("Port Arthur", "TX")]
CITIES_OTHER = [("Lake Charles", "LA"), ("Slidell", "LA")]
UNITS = ["Apt 5B", "Apt 12", "Unit 3", "Suite 210", "#4", "Apt. 7C"]


def street():
    d = rng.choice(DIRECTIONS)
    name = rng.choice(STREET_NAMES)
    sfx = rng.choice(SUFFIXES)
    return " ".join(x for x in (d, name, sfx) if x)


def number():
    return str(rng.choice([rng.randint(100, 999), rng.randint(1000, 19999)]))


def zipcode():
    return str(rng.choice([77002, 77025, 77035, 77036, 77042, 77063, 77074, 77096, 77449, 77539]))


def mentions_texas(s):
    return "texas" in s.lower() or re.search(r"(?<![A-Za-z0-9_])tx(?![A-Za-z0-9_])", s, re.I)


def complete(base, has_locality, hashtags):
    if not has_locality:
        if any("houston" in h.lower() for h in hashtags):
            return base + ", Houston, TX"
        return base + ", Texas"
    return base if mentions_texas(base) else base + ", Texas"


def address_plain():
    """(text as written, completed-without-suffix base, has_locality)."""
    s = f"{number()} {street()}"
    return s, s, False


def address_full():
    n, st = number(), street()
    city, state = rng.choice(CITIES_TX)
    form = rng.randrange(4)
    if form == 0:
        s = f"{n} {st}, {city}, {state} {zipcode()}"
    elif form == 1:
        s = f"{n} {st}, {city}, {state}"
    elif form == 2:
        s = f"{n} {st} {city} {state}"
    else:
        z = zipcode()
        s = f"{n} {st}, {city} {z}"
    return s, s, True


def address_designator():
    n = number()
    form = rng.choice(DESIGNATOR_FORMS)
    s = f"{n} " + form.format(n=rng.randint(1, 99), l=rng.choice("ABCDGHKMN"))
    return s, s, False


def address_unit():
    n, st, unit = number(), street(), rng.choice(UNITS)
    s = f"{n} {st} {unit}"
    return s, s, False


def address_other_state():
    n, st = number(), street()
    city, state = rng.choice(CITIES_OTHER)
    s = f"{n} {st}, {city}, {state}"
    return s, s, True


def tags(houston_bias):
    out = []
    if rng.random() < houston_bias:
        out.append(rng.choice(HOUSTON_TAGS))
    if rng.random() < 0.8:
        out.append(rng.choice(OTHER_TAGS))
    return out


rows = []  # dicts: text, label, tags, address (completed or None), family


def add(family, text, label, hashtags, completed=None):
    rows.append(dict(family=family, text=text, label=label, tags=hashtags, completed=completed))


def with_address(kind):
    return {"plain": address_plain, "full": address_full, "designator": address_designator,
            "unit": address_unit, "other_state": address_other_state}[kind]()


# --- positives ---------------------------------------------------------------
def positive(family, kind, lead_options):
    written, base, loc = with_address(kind)
    ht = tags(0.5)
    lead = rng.choice(lead_options)
    tail = " ".join(ht)
    sep = rng.choice([" at ", " - ", ": "])
    end = rng.choice([". ", "! ", " "])
    if loc:
        text = f"{lead}{sep}{written}. {tail}".strip()
    else:
        text = f"{lead}{sep}{written}{end}{tail}".strip()
    add(family, text, 1, ht, complete(base, loc, [h.lstrip("#") for h in ht]))


for _ in range(30):
    positive("help_plain", "plain", HELP)
for _ in range(20):
    positive("situation_full", "full", [s.capitalize() for s in SITUATION])
for _ in range(10):
    positive("help_designator", "designator", HELP)
for _ in range(8):
    positive("help_unit", "unit", HELP)
for _ in range(3):
    positive("help_other_state", "other_state", HELP)

# Paper-style example texts.
add("quoted", "3 friends stuck at 4055 South #Braeswood Boulevard and S. Gessner #HoustonFlood", 1,
    ["#HoustonFlood"], "4055 South Braeswood Boulevard, Houston, TX")
add("quoted", "Please help! 4055 South #Braeswood Boulevard #HoustonFlood", 1, ["#HoustonFlood"],
    "4055 South Braeswood Boulevard, Houston, TX")
add("quoted", "Need to be rescued 1108 Highway 7 #Harvey", 1, ["#Harvey"], "1108 Highway 7, Texas")
add("quoted", "need rescue 123 Ave. G water in the house #Harvey", 1, ["#Harvey"], "123 Ave. G, Texas")

# Hard positives: real requests without a house number (expected misses).
HARD_POS = [
    "@KPRC2 there are stranded families at Creech Elementary on Mason Rd. You have boats nearby. Please send them! #Harvey",
    "Please help, elderly man trapped at the corner of Bellaire and Gessner #HoustonFlood",
    "Family of 5 stuck on the roof near the end of Tidwell Rd, need rescue #Harvey",
    "SOS trapped in apartment complex off Fondren near Bissonnet #HurricaneHarvey",
    "Need help! stranded at the intersection of Kirby and Holcombe #houstonflood",
    "my mom is stuck in her attic in Meyerland please help #Harvey",
    "Please send a boat to Cypress Creek Pkwy, kids stranded #Harvey",
    "rescue needed: 4 adults trapped in Kingwood subdivision #HurricaneHarvey",
]
for t in HARD_POS:
    add("hard_positive", t, 1, re.findall(r"#\w+", t))

# --- negatives ---------------------------------------------------------------
CHATTER = [
    "Stay safe everyone #Harvey", "Praying for Houston tonight #HurricaneHarvey",
    "Hurricane Harvey making landfall near Rockport", "The flooding on I-45 is unreal #Harvey",
    "Thinking of everyone in Texas right now", "So much rain. Stay inside #houstonflood",
    "Our thoughts are with the families affected by flooding #Harvey",
    "Hurricane season is no joke", "Power is out but we are ok #Harvey",
    "Bayou levels still rising downtown #houstonflood",
]
for i in range(13):
    base = rng.choice(CHATTER)
    add("chatter", f"{base} ({i + 1})" if i >= len(CHATTER) else base, 0, re.findall(r"#\w+", base))


def negative_with_address(family, leads, kind="plain"):
    written, base, loc = with_address(kind)
    ht = tags(0.4)
    text = f"{rng.choice(leads)} {written}. {' '.join(ht)}".strip()
    add(family, text, 0, ht, complete(base, loc, [h.lstrip("#") for h in ht]))


OFFERS = ["We are offering shelter and food at", "Church offering shelter tonight at",
          "We have shelter for 20 people at", "Can host two families, come to",
          "Volunteers needed to sort donations at", "Donate water and diapers at"]
STATUS = ["Update: everyone was rescued from", "Family got rescued from", "We were rescued! Safe now, left",
          "Status update - neighbors been rescued at", "Rescued! Everyone safe now at"]
NEWS = ["Breaking news: water rescue underway near", "Live coverage of flooding from",
        "KHOU reports high water at", "According to officials, shelter opened at"]
POLITICAL = ["The administration failed the people stranded near", "Blame city policy for flooding at",
             "Congress must act, look at the water at"]
ADS = ["Flood sale! 50% discount on pumps at", "Promo: generators in stock at",
       "Limited time offer on water damage repair, visit"]
NEUTRAL = ["Meeting moved to", "Package delivered to", "Happy birthday party at", "Open house this weekend at",
           "Grabbing lunch at"]

for _ in range(22):
    negative_with_address("offer_help", OFFERS, rng.choice(["plain", "full"]))
for _ in range(18):
    negative_with_address("status_update", STATUS, rng.choice(["plain", "full"]))
for _ in range(16):
    negative_with_address("news_report", NEWS, rng.choice(["plain", "full"]))
for _ in range(10):
    negative_with_address("political", POLITICAL)
for _ in range(10):
    negative_with_address("ads", ADS, rng.choice(["plain", "full"]))
for _ in range(20):
    negative_with_address("neutral_address", NEUTRAL, rng.choice(["plain", "full", "designator"]))

# Hard negatives: not requests, but address plus situation words (expected false alarms).
HARD_NEG = [
    "Car stuck in traffic for an hour outside {a}, ugh #Harvey",
    "Roof guy finally showed up at {a} #houstonflood",
    "Left the kids' bikes stranded in the garage at {a} lol #Harvey",
    "Our old attic at {a} is full of junk #HurricaneHarvey",
    "Stuck at work at {a} until 6 #Harvey",
]
for t in HARD_NEG:
    written, base, loc = address_plain()
    ht = re.findall(r"#\w+", t)
    add("hard_negative", t.format(a=written), 0, ht, complete(base, loc, [h.lstrip("#") for h in ht]))

# Duplicated requests for one address (common in disasters) exercise the cache.
dup_src = [r for r in rows if r["family"] == "help_plain"][:3]
for r in dup_src:
    add("repeat", "RT " + r["text"], 1, r["tags"], r["completed"])

# --- emit --------------------------------------------------------------------
rng.shuffle(rows)
OUT.mkdir(parents=True, exist_ok=True)
start = datetime(2017, 8, 26, 12, 0, tzinfo=timezone.utc)

with open(OUT / "synthetic_labelled.csv", "w", newline="", encoding="utf-8") as f:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["id", "text", "label", "hashtags"])
    for i, r in enumerate(rows):
        w.writerow([f"syn{i:04d}", r["text"], r["label"], " ".join(h.lstrip("#").lower() for h in r["tags"])])

with open(OUT / "synthetic_tweets.ndjson", "w", encoding="utf-8") as f:
    for i, r in enumerate(rows):
        t = start + timedelta(minutes=rng.randint(0, 5 * 24 * 60))
        rec = {
            "id_str": f"syn{i:04d}",
            "created_at": t.strftime("%a %b %d %H:%M:%S +0000 %Y"),
            "text": r["text"],
            "coordinates": None,
        }
        if rng.random() < 0.2:
            rec["coordinates"] = {"type": "Point",
                                  "coordinates": [round(rng.uniform(-95.8, -95.0), 5),
                                                  round(rng.uniform(29.5, 30.1), 5)]}
        f.write(json.dumps(rec, ensure_ascii=False) + "\n")


def key(s):
    s = re.sub(r"\s+", " ", s.strip().lower())
    return re.sub(r"\s*,\s*", ", ", s)


omitted = []
seen = set()
gaz = []
for r in rows:
    c = r["completed"]
    if c is None or key(c) in seen:
        continue
    seen.add(key(c))
    gaz.append(c)
positives = [c for c in gaz if any(r["completed"] == c and r["label"] == 1 and r["family"] not in ("repeat", "quoted") for r in rows)]
omitted = sorted(rng.sample(positives, 3))

with open(OUT / "gazetteer.tsv", "w", encoding="utf-8") as f:
    f.write("# address\tlongitude\tlatitude\tprecision (synthetic coordinates)\n")
    for c in gaz:
        if c in omitted:
            continue
        lon = round(rng.uniform(-95.75, -95.05), 5)
        lat = round(rng.uniform(29.55, 30.05), 5)
        f.write(f"{c}\t{lon}\t{lat}\t{rng.choice(['rooftop', 'rooftop', 'street'])}\n")

with open(OUT / "expected_ungeocoded.txt", "w", encoding="utf-8") as f:
    for c in omitted:
        f.write(c + "\n")

print(f"{len(rows)} rows, {sum(r['label'] for r in rows)} positive, {len(gaz) - len(omitted)} gazetteer rows")
