"""Mu+lambda genetic search over the boosting hyperparameters.

Fitness is the mean balanced accuracy over the k validation folds.
Selection is elitist: the best mu of parents plus children survive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import gbdt
from .gbdt import INTEGER_PARAMS, PARAM_RANGES, GbdtParams
from .stats import balanced_accuracy
from .util import fmt_float, rng_stream

GENE_ORDER = ("scale_pos_weight", "eta", "subsample", "n_estimators",
              "colsample_bytree", "max_depth", "lambda_", "alpha", "gamma",
              "min_child_weight")

DEFAULT_MU = 150
DEFAULT_LAMBDA = 150
DEFAULT_GENERATIONS = 20
CROSSOVER_P = 0.8
MUTATION_P = 0.2


@dataclass(frozen=True)
class Gene:
    name: str
    low: float
    high: float
    integer: bool


def default_gene_spec():
    return [Gene(name, lo, hi, name in INTEGER_PARAMS)
            for name, (lo, hi) in ((n, PARAM_RANGES[n]) for n in GENE_ORDER)]


@dataclass
class Individual:
    genome: tuple  # gene values in GENE_ORDER
    fitness: float | None = None


def genome_to_params(genome):
    return GbdtParams(**dict(zip(GENE_ORDER, genome))).validate_in_range()


def random_genome(spec, rng):
    vals = []
    for gene in spec:
        if gene.integer:
            vals.append(int(rng.integers(int(gene.low), int(gene.high) + 1)))
        else:
            vals.append(float(rng.uniform(gene.low, gene.high)))
    return tuple(vals)


def crossover_two_point(parent_a, parent_b, rng, crossover_p=CROSSOVER_P):
    """Swap the middle segment between two cut points with prob crossover_p."""
    if rng.random() >= crossover_p:
        return tuple(parent_a), tuple(parent_b)
    n = len(parent_a)
    c1, c2 = sorted(rng.choice(n + 1, size=2, replace=False))
    child_a = parent_a[:c1] + parent_b[c1:c2] + parent_a[c2:]
    child_b = parent_b[:c1] + parent_a[c1:c2] + parent_b[c2:]
    return tuple(child_a), tuple(child_b)


def mutate_random_reset(genome, spec, rng, mutation_p=MUTATION_P):
    """Each gene independently redrawn uniformly in bounds with prob mutation_p."""
    vals = list(genome)
    for i, gene in enumerate(spec):
        if rng.random() < mutation_p:
            if gene.integer:
                vals[i] = int(rng.integers(int(gene.low), int(gene.high) + 1))
            else:
                vals[i] = float(rng.uniform(gene.low, gene.high))
    return tuple(vals)


def tournament_pick(population, rng):
    """Size-2 tournament; ties broken uniformly at random."""
    i, j = rng.integers(len(population)), rng.integers(len(population))
    a, b = population[i], population[j]
    if a.fitness > b.fitness:
        return a
    if b.fitness > a.fitness:
        return b
    return a if rng.random() < 0.5 else b


def _genome_key(genome):
    return tuple(float(f"{v:.12g}") for v in genome)


@dataclass
class EvolutionHistory:
    rows: list  # (generation, best_fitness, mean_fitness, best_genome)
    children_evaluated: int = 0
    total_evaluated: int = 0


def evolve(fitness_fn, spec=None, mu=DEFAULT_MU, lam=DEFAULT_LAMBDA,
           generations=DEFAULT_GENERATIONS, seed=0,
           crossover_p=CROSSOVER_P, mutation_p=MUTATION_P):
    """Run the elitist mu+lambda strategy; returns (best Individual, history).

    `fitness_fn(genome) -> float` is maximized. Each generation produces
    lam children via lam/2 repetitions of tournament selection, two-point
    crossover and random-reset mutation, then keeps the top mu of parents
    plus children. Fitness values are cached by canonical genome.
    """
    if mu < 2 or lam < 2:
        raise ValueError("mu and lambda must be >= 2")
    if spec is None:
        spec = default_gene_spec()
    rng = rng_stream(seed, "genopt")
    cache = {}
    counters = {"children": 0, "total": 0}

    def evaluate(ind, is_child):
        key = _genome_key(ind.genome)
        if key not in cache:
            cache[key] = float(fitness_fn(ind.genome))
        ind.fitness = cache[key]
        counters["total"] += 1
        if is_child:
            counters["children"] += 1

    population = [Individual(random_genome(spec, rng)) for _ in range(mu)]
    for ind in population:
        evaluate(ind, is_child=False)

    best_ever = max(population, key=lambda i: i.fitness)
    history = EvolutionHistory(rows=[])
    for gen in range(1, generations + 1):
        children = []
        while len(children) < lam:
            pa = tournament_pick(population, rng)
            pb = tournament_pick(population, rng)
            ga, gb = crossover_two_point(pa.genome, pb.genome, rng, crossover_p)
            for g in (ga, gb):
                if len(children) < lam:
                    children.append(Individual(
                        mutate_random_reset(g, spec, rng, mutation_p)))
        for child in children:
            evaluate(child, is_child=True)

        combined = population + children
        combined.sort(key=lambda i: i.fitness, reverse=True)
        population = combined[:mu]
        if population[0].fitness > best_ever.fitness:
            best_ever = population[0]
        mean_fit = float(np.mean([i.fitness for i in population]))
        history.rows.append((gen, best_ever.fitness, mean_fit, best_ever.genome))

    history.children_evaluated = counters["children"]
    history.total_evaluated = counters["total"]
    return best_ever, history


def cv_fitness(table, plan, seed=0, threshold=0.5):
    """Fitness closure: mean validation BACC of a gbdt over the fold plan."""
    id_pos = {rid: i for i, rid in enumerate(table.ids)}

    fold_rows = {}
    for f in range(plan.k):
        val = np.array([id_pos[i] for i in plan.fold_ids(f)], dtype=np.int64)
        trn = np.array([id_pos[i] for i in plan.train_ids(f)], dtype=np.int64)
        fold_rows[f] = (trn, val)

    def fitness(genome):
        params = genome_to_params(genome)
        baccs = []
        for f in range(plan.k):
            trn, val = fold_rows[f]
            model = gbdt.fit(table.X[trn], table.labels[trn], params,
                             seed=rng_stream(seed, "fit", f).integers(2**63),
                             feature_names=table.columns)
            proba = gbdt.predict_proba(model, table.X[val])
            baccs.append(balanced_accuracy(table.labels[val], proba, threshold))
        return float(np.mean(baccs))

    return fitness


def write_history(history, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("generation,best_fitness,mean_fitness,best_genome_json\n")
        for gen, best, mean, genome in history.rows:
            genome_json = json.dumps(dict(zip(GENE_ORDER, genome)))
            fh.write(f'{gen},{fmt_float(best)},{fmt_float(mean)},"{genome_json}"\n')
