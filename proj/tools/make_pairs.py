#!/usr/bin/env python3
"""Writes the deterministic 100-pair batch fixture (fixtures/pairs.jsonl)."""
import json
import random
import sys

COMPANIES = ["Nordlys ApS", "Fjordbyen Kommune", "Havnens Logistik", "Acme", "Bølge Energi", "Skovly Byg"]
TITLES = ["Data Engineer", "Softwareudvikler", "Dataanalytiker", "Projektleder", "Lagerchef",
          "Elektriker", "Backend-udvikler", "Bogholder", "Sælger"]
SKILLS = ["Python", "SQL", "Java", "Go", "Excel", "Power BI", "maskinlæring", "dataanalyse",
          "projektledelse", "kundeservice", "regnskab", "bogføring", "lagerstyring", "Docker",
          "Kubernetes", "Scrum", "agil udvikling", "kommunikation", "salg", "markedsføring",
          "el-installation", "truckcertifikat"]
LANGUAGES = ["dansk", "engelsk", "tysk", "svensk", "fransk"]
NAMES = ["Kim", "Mette Sørensen", "Jonas", "Sara Østergaard", "Ali", "Emil", "Ida", "Freja", "", "Åse"]
FILLER = ["Vi tilbyder en fleksibel hverdag.", "Du bliver en del af et stærkt team.",
          "Erfaring er et plus.", "Løn efter kvalifikationer."]


def pick(rng, seq, k):
    return rng.sample(seq, k)


def main(out_path):
    rng = random.Random(20240917)
    lines = []
    for i in range(100):
        company = rng.choice(COMPANIES)
        title = rng.choice(TITLES)
        job_skills = pick(rng, SKILLS, rng.randint(1, 4))
        job_langs = pick(rng, LANGUAGES, rng.randint(0, 2))
        desc = f"Vi søger en {title.lower()} med erfaring i {', '.join(job_skills)}."
        if job_langs:
            desc += f" Du taler {' og '.join(job_langs)}."
        desc += " " + rng.choice(FILLER)
        job = {"id": f"job-{i:03d}", "title": title, "company": company, "description": desc}

        shared = pick(rng, job_skills, rng.randint(0, len(job_skills)))
        extra = pick(rng, SKILLS, rng.randint(0, 3))
        cand_langs = pick(rng, LANGUAGES, rng.randint(0, 3))
        following = pick(rng, COMPANIES, rng.randint(0, 2))
        cand = {
            "id": f"cand-{i:03d}",
            "name": rng.choice(NAMES),
            "headline": rng.choice(TITLES + ["Studerende", "Nyuddannet"]),
            "keywords": shared + extra,
            "preferred_titles": pick(rng, TITLES, rng.randint(0, 2)),
            "work_experience": [f"{rng.choice(TITLES)} hos {rng.choice(COMPANIES)}"],
            "education": [],
            "resume": ("Jeg taler " + ", ".join(cand_langs) + ".") if cand_langs else "",
            "following": following,
        }
        lines.append(json.dumps({"job": job, "candidate": cand}, ensure_ascii=False))
    with open(out_path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "fixtures/pairs.jsonl")
