#!/usr/bin/env python3
"""Write a GeoNames-format export (19 tab-separated columns) restricted to
US, CN, GB and CA, used as input to `topic-trends compile-gazetteer`.

City rows come from the `geonamescache` package (GeoNames cities15000 data,
CC-BY 4.0). Country and first/second-level administrative rows are listed
here because geonamescache only ships US states.

    pip install geonamescache
    python3 tools/geonames_fixture.py > crates/core/fixtures/geonames_export.txt
"""
import json
import os
import re
import sys
import unicodedata

import geonamescache

TARGETS = ("US", "CN", "GB", "CA")
MIN_POP = 50000
ASCII_ALT = re.compile(r"^[A-Za-z][A-Za-z .'-]*$")

COUNTRIES = {
    "US": ("United States", ["USA", "US", "U.S.", "U.S.A.", "America",
                              "United States of America", "United States"]),
    "CN": ("China", ["PRC", "People's Republic of China", "Mainland China",
                     "Chinese mainland"]),
    "GB": ("United Kingdom", ["UK", "U.K.", "Britain", "Great Britain",
                              "United Kingdom of Great Britain and Northern Ireland"]),
    "CA": ("Canada", ["Dominion of Canada"]),
}

CN_ADM1 = [
    "Anhui", "Beijing", "Chongqing", "Fujian", "Gansu", "Guangdong",
    "Guangxi", "Guizhou", "Hainan", "Hebei", "Heilongjiang", "Henan",
    "Hubei", "Hunan", "Inner Mongolia", "Jiangsu", "Jiangxi", "Jilin",
    "Liaoning", "Ningxia", "Qinghai", "Shaanxi", "Shandong", "Shanghai",
    "Shanxi", "Sichuan", "Tianjin", "Tibet", "Xinjiang", "Yunnan",
    "Zhejiang",
]
CN_ADM1_ALT = {
    "Inner Mongolia": ["Nei Mongol"],
    "Tibet": ["Xizang", "Tibet Autonomous Region"],
    "Xinjiang": ["Xinjiang Uygur", "Xinjiang Uyghur Autonomous Region"],
    "Guangxi": ["Guangxi Zhuang Autonomous Region"],
    "Ningxia": ["Ningxia Hui Autonomous Region"],
}

CA_ADM1 = [
    ("Alberta", "AB"), ("British Columbia", "BC"), ("Manitoba", "MB"),
    ("New Brunswick", "NB"), ("Newfoundland and Labrador", "NL"),
    ("Nova Scotia", "NS"), ("Ontario", "ON"), ("Prince Edward Island", "PE"),
    ("Quebec", "QC"), ("Saskatchewan", "SK"), ("Northwest Territories", "NT"),
    ("Nunavut", "NU"), ("Yukon", "YT"),
]
CA_ADM1_ALT = {
    "Quebec": ["Québec", "Province of Quebec"],
    "Newfoundland and Labrador": ["Newfoundland", "Labrador"],
    "Prince Edward Island": ["PEI", "P.E.I."],
    "Yukon": ["Yukon Territory"],
    "British Columbia": ["B.C."],
}

GB_ADM1 = ["England", "Scotland", "Wales", "Northern Ireland"]

# Ceremonial counties of England, Scottish council areas, principal areas of
# Wales and counties of Northern Ireland.
GB_ADM2 = {
    "England": [
        "Bedfordshire", "Berkshire", "Bristol", "Buckinghamshire",
        "Cambridgeshire", "Cheshire", "City of London", "Cornwall",
        "Cumbria", "Derbyshire", "Devon", "Dorset", "Durham",
        "East Riding of Yorkshire", "East Sussex", "Essex",
        "Gloucestershire", "Greater London", "Greater Manchester",
        "Hampshire", "Herefordshire", "Hertfordshire", "Isle of Wight",
        "Kent", "Lancashire", "Leicestershire", "Lincolnshire",
        "Merseyside", "Norfolk", "North Yorkshire", "Northamptonshire",
        "Northumberland", "Nottinghamshire", "Oxfordshire", "Rutland",
        "Shropshire", "Somerset", "South Yorkshire", "Staffordshire",
        "Suffolk", "Surrey", "Tyne and Wear", "Warwickshire",
        "West Midlands", "West Sussex", "West Yorkshire", "Wiltshire",
        "Worcestershire", "Yorkshire", "Cotswolds", "Lake District",
    ],
    "Scotland": [
        "Aberdeenshire", "Angus", "Argyll and Bute", "Clackmannanshire",
        "Dumfries and Galloway", "East Ayrshire", "East Dunbartonshire",
        "East Lothian", "East Renfrewshire", "Falkirk", "Fife", "Highland",
        "Inverclyde", "Midlothian", "Moray", "North Ayrshire",
        "North Lanarkshire", "Orkney", "Perth and Kinross", "Renfrewshire",
        "Scottish Borders", "Shetland", "South Ayrshire",
        "South Lanarkshire", "Stirling", "West Dunbartonshire",
        "West Lothian", "Outer Hebrides", "Scottish Highlands", "Inverness",
    ],
    "Wales": [
        "Anglesey", "Blaenau Gwent", "Bridgend", "Caerphilly",
        "Carmarthenshire", "Ceredigion", "Conwy", "Denbighshire",
        "Flintshire", "Gwynedd", "Merthyr Tydfil", "Monmouthshire",
        "Neath Port Talbot", "Pembrokeshire", "Powys", "Rhondda Cynon Taf",
        "Torfaen", "Vale of Glamorgan", "Wrexham", "Snowdonia",
    ],
    "Northern Ireland": [
        "County Antrim", "County Armagh", "County Down", "County Fermanagh",
        "County Londonderry", "County Tyrone", "Derry", "Londonderry",
    ],
}


def row(gid, name, alts, fclass, fcode, cc, admin1="", pop=0):
    ascii_name = unicodedata.normalize("NFKD", name).encode("ascii", "ignore").decode()
    return "\t".join([
        str(gid), name, ascii_name, ",".join(alts), "0", "0", fclass, fcode,
        cc, "", admin1, "", "", "", str(pop), "", "0", "", "2020-01-01",
    ])


def main():
    data = os.path.join(os.path.dirname(geonamescache.__file__), "data")
    cities = json.load(open(os.path.join(data, "cities15000.json")))
    states = json.load(open(os.path.join(data, "us_states.json")))
    out = []
    gid = 90000000

    for cc in TARGETS:
        name, alts = COUNTRIES[cc]
        gid += 1
        out.append((cc, 0, name, row(gid, name, alts, "A", "PCLI", cc)))

    for code, s in sorted(states.items()):
        out.append(("US", 1, s["name"], row(s["geonameid"], s["name"], [], "A", "ADM1", "US", code)))
    for i, name in enumerate(CN_ADM1):
        gid += 1
        alts = CN_ADM1_ALT.get(name, []) + [name + " Province"]
        out.append(("CN", 1, name, row(gid, name, alts, "A", "ADM1", "CN", "%02d" % i)))
    for i, (name, code) in enumerate(CA_ADM1):
        gid += 1
        alts = [code] + CA_ADM1_ALT.get(name, [])
        out.append(("CA", 1, name, row(gid, name, alts, "A", "ADM1", "CA", "%02d" % i)))
    for i, name in enumerate(GB_ADM1):
        gid += 1
        out.append(("GB", 1, name, row(gid, name, [], "A", "ADM1", "GB", "%02d" % i)))
        for county in GB_ADM2[name]:
            gid += 1
            out.append(("GB", 2, county, row(gid, county, [], "A", "ADM2", "GB", "%02d" % i)))

    for c in cities.values():
        cc = c["countrycode"]
        if cc not in TARGETS or c["population"] < MIN_POP:
            continue
        alts = sorted({a for a in c["alternatenames"] if ASCII_ALT.match(a)})
        out.append((cc, 3, c["name"], row(c["geonameid"], c["name"], alts, "P", "PPL", cc,
                                           c.get("admin1code", ""), c["population"])))

    out.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    w = sys.stdout
    for r in out:
        w.write(r[3] + "\n")


if __name__ == "__main__":
    main()
