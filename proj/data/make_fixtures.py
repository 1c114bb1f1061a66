# Copyright 2026 The insightgraph Authors.
# SPDX-License-Identifier: Apache-2.0
#
# Regenerates the bundled scenario CSVs. Output is deterministic; rerun only
# when the fixture design changes, then refresh the golden files by hand.

import csv
import datetime as dt
import pathlib
import random

HERE = pathlib.Path(__file__).resolve().parent


def write(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def baltimore(rng):
    premises = {
        "STREET": ("O", ["ROBBERY - STREET", "COMMON ASSAULT", "AUTO THEFT"]),
        "ROW/TOWNHOUSE": ("I", ["BURGLARY", "LARCENY"]),
        "APARTMENT": ("I", ["BURGLARY", "COMMON ASSAULT"]),
        "RETAIL": ("I", ["LARCENY", "ROBBERY - COMMERCIAL"]),
        "PARKING LOT": ("O", ["AUTO THEFT", "LARCENY FROM AUTO"]),
    }
    # Peak on the funeral day, then two smaller unrest days.
    counts = {day: rng.randint(3, 8) for day in range(1, 31)}
    counts[27] = 22
    counts[28] = 15
    counts[25] = 11
    rows = []
    for day, n in counts.items():
        for _ in range(n):
            premise = rng.choice(sorted(premises))
            io, crimes = premises[premise]
            rows.append([f"04/{day:02d}/2015", io, premise, rng.choice(crimes)])
    rng.shuffle(rows)
    write(HERE / "baltimore" / "baltimore_crime.csv", ["CrimeDate", "Inside/Outside", "Premise", "Description"], rows)


def rents(rng):
    states = ["MD", "VA", "PA", "OH", "NC", "GA", "TX", "CO"]
    rows = []
    for i in range(120):
        rent = round(rng.gauss(1050, 180))
        rows.append([f"County {i + 1:03d}", rng.choice(states), rent])
    write(HERE / "rents" / "rents.csv", ["county", "state", "rent"], rows)


def movies(rng):
    winners = [
        ("Crash", 2005), ("The Departed", 2006), ("No Country for Old Men", 2007),
        ("Slumdog Millionaire", 2008), ("The Hurt Locker", 2009), ("The King's Speech", 2010),
        ("The Artist", 2011), ("Argo", 2012), ("12 Years a Slave", 2013), ("Birdman", 2014),
        ("Titanic", 1997), ("Shakespeare in Love", 1998), ("American Beauty", 1999),
        ("Gladiator", 2000), ("A Beautiful Mind", 2001), ("Chicago", 2002),
    ]
    others = [f"Feature {i:02d}" for i in range(1, 31)]
    movie_rows = []
    for title, year in winners:
        length = rng.randint(95, 180)
        rating = round(4.0 + 0.025 * length + rng.uniform(-0.3, 0.3), 1)
        movie_rows.append([title, year, length, rating])
    for title in others:
        length = rng.randint(80, 150)
        movie_rows.append([title, rng.randint(1995, 2014), length, round(rng.uniform(4.5, 8.0), 1)])
    rng.shuffle(movie_rows)
    oscar_rows = [[title, year + 1, "Best Picture"] for title, year in winners]
    write(HERE / "movies" / "movies.csv", ["title", "year", "length", "rating"], movie_rows)
    write(HERE / "movies" / "oscars.csv", ["film", "ceremony", "category"], oscar_rows)


def birdstrikes(rng):
    years = [2010, 2011, 2012, 2013, 2014]
    precip = {
        "none": [10, 9, 8, 7, 6],
        "fog": [5, 4, 4, 3, 2],
        "snow": [4, 4, 3, 3, 2],
        "rain": [2, 4, 6, 8, 10],
        None: [3, 6, 9, 12, 15],
    }
    sky = {
        "no cloud": [8, 9, 10, 11, 12],
        "some cloud": [8, 9, 10, 11, 11],
        "overcast": [8, 9, 10, 11, 12],
    }
    rows = []
    for i, year in enumerate(years):
        p = [cond for cond, n in precip.items() for _ in range(n[i])]
        s = [cond for cond, n in sky.items() for _ in range(n[i])]
        assert len(p) == len(s)
        rng.shuffle(s)
        for pc, sc in zip(p, s):
            day = dt.date(year, 1, 1) + dt.timedelta(days=rng.randrange(365))
            rows.append([day.isoformat(), pc if pc is not None else "", sc])
    rng.shuffle(rows)
    write(HERE / "birdstrikes" / "birdstrikes.csv", ["incident_date", "precip", "sky"], rows)


def main():
    baltimore(random.Random(2015))
    rents(random.Random(2006))
    movies(random.Random(2005))
    birdstrikes(random.Random(2019))


if __name__ == "__main__":
    main()
