"""Stream generators, reductions, sensitivity audits and the experiment CLI."""
