#!/usr/bin/env python3
"""Mine marker-to-category association rules from the predictions of
demo 03 and render the ranked table.

Each rule (marker => category) carries its support count, the
confidence P(category | marker) and the category's prior P(category),
so a rule is interesting exactly when confidence clears the prior.
"""

from pathlib import Path

from discmark import (MiningConfig, compute_priors, default_lexicon,
                      import_predictions, join_predictions, mine_rules,
                      render_table)
from discmark.datasets import read_labeled

OUT = Path("demo-output")

labeled = []
for name in ("CRtoy", "NLItoy", "STStoy"):
    labeled.extend(read_labeled(OUT / f"adapted-{name}.tsv"))
preds = import_predictions(OUT / "predictions.tsv",
                           default_lexicon().class_names())
print(f"{len(labeled)} labeled examples, {len(preds)} predictions")

joins = join_predictions(labeled, preds)
priors = compute_priors(labeled)
rules = mine_rules(joins, priors, MiningConfig(min_marker_count=5))
print(f"{len(rules)} rules survive the frequency filter\n")

print(render_table(rules[:12], "text"))

(OUT / "rules.tsv").write_text(render_table(rules, "tsv"), encoding="utf-8")
print(f"full machine-readable table in {OUT / 'rules.tsv'}")
