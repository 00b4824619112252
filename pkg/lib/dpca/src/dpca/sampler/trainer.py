"""
Gibbs Trainer

Burn-in sweeps followed by recording sweeps. During recording the posterior
mean of omega, (prior + counts) / row total, is averaged instead of the
sampled omega; per-document proportion moments and the per-document log
likelihood of every cycle are recorded too.
"""

from pathlib import Path
import sys
import time
from typing import Optional

from joblib import Parallel, delayed
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from dpca.corpus import Corpus
from dpca.errors import EmptyCorpusError, IncompatibleCorpusError
from dpca.model import ComponentModel, Variant, document_log_likelihoods
from dpca.sampler.conditionals import pool_assignments, posterior_mean_omega, resample_omega
from dpca.sampler.sweep import SampleState, SweepParams, initial_state, sweep_document
from dpca.utils.rng import INIT_STREAM, OMEGA_STREAM, SWEEP_STREAM, substream


class TrainConfig(BaseModel):
    """Gibbs schedule and execution settings."""

    burn_in: int = Field(100, ge=1, description="Discarded cycles")
    recording: int = Field(50, ge=1, description="Cycles averaged into the result")
    seed: int = 0
    variant: Optional[Variant] = Field(
        None, description="Expected model variant; None accepts the model's own"
    )
    workers: int = Field(1, ge=1, description="Threads for the per-document steps")
    progress_log: Optional[Path] = Field(None, description="TSV file, one line per cycle")
    show_progress: bool = False


class TrainResult(BaseModel):
    """Trained model plus per-document posterior summaries."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    model: ComponentModel
    log_likelihoods: list[float] = Field(description="One per recording cycle")
    burn_in_log_likelihoods: list[float]
    document_log_likelihoods: np.ndarray = Field(
        description="recording x I log likelihoods; rows sum to log_likelihoods"
    )
    m_mean: np.ndarray = Field(description="I x K sample means of m")
    m_std: np.ndarray = Field(description="I x K sample standard deviations of m")
    intensity_mean: Optional[np.ndarray] = Field(
        None, description="I x K sample means of lambda (gamma-poisson only)"
    )
    seconds: float = 0.0


class GibbsTrainer:
    """
    Runs the uncollapsed Gibbs sampler over one corpus.

    Usage:
        trainer = GibbsTrainer(corpus, model, TrainConfig(burn_in=100, recording=50, seed=7))
        result = trainer.run()
    """

    def __init__(self, corpus: Corpus, model: ComponentModel, config: TrainConfig | None = None):
        self.config = config or TrainConfig()
        self._check_compatible(corpus, model, self.config)
        self.corpus = corpus
        self.model = model
        self._progress_lines: list[str] = []

    @staticmethod
    def _check_compatible(corpus: Corpus, model: ComponentModel, config: TrainConfig):
        if corpus.I == 0:
            raise EmptyCorpusError("Cannot train on a corpus with no documents")
        if corpus.bag_specs != model.bag_specs:
            raise IncompatibleCorpusError(
                f"Corpus bags {corpus.bag_specs} do not match model bags {model.bag_specs}"
            )
        if config.variant is not None and config.variant != model.variant:
            raise ValueError(
                f"Train config expects variant '{config.variant.value}', "
                f"model is '{model.variant.value}'"
            )

    def _step_all(
        self, states: list[SampleState], params: SweepParams, cycle: int
    ) -> list[SampleState]:
        seed = self.config.seed
        jobs = (
            delayed(sweep_document)(doc, state, params, substream(seed, SWEEP_STREAM, cycle, i))
            for i, (doc, state) in enumerate(zip(self.corpus.documents, states))
        )
        # results come back in submission order whatever the worker count
        return Parallel(n_jobs=self.config.workers, prefer="threads")(jobs)

    def _log_cycle(self, cycle: int, phase: str, log_likelihood: float, started: float):
        self._progress_lines.append(
            f"{cycle}\t{phase}\t{log_likelihood!r}\t{time.perf_counter() - started:.3f}"
        )

    def _write_progress_log(self):
        path = self.config.progress_log
        if path is None:
            return
        lines = ["cycle\tphase\tlog_likelihood\tseconds", *self._progress_lines]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    def run(self) -> TrainResult:
        config = self.config
        model = self.model
        docs = self.corpus.documents
        I, K = self.corpus.I, model.K
        started = time.perf_counter()

        params = SweepParams.from_model(model)
        states = [initial_state(params, substream(config.seed, INIT_STREAM, i)) for i in range(I)]

        m_sum = np.zeros((I, K))
        m_sq = np.zeros((I, K))
        lam_sum = np.zeros((I, K)) if model.variant == Variant.GAMMA_POISSON else None
        omega_sum = {bag: np.zeros_like(rows) for bag, rows in model.omega.items()}
        burn_in_ll: list[float] = []
        recording_ll: list[float] = []
        recording_doc_ll: list[np.ndarray] = []

        phases = [("burn-in", range(config.burn_in))]
        phases.append(("recording", range(config.burn_in, config.burn_in + config.recording)))

        for phase, cycles in phases:
            if config.show_progress:
                print("=" * 60, file=sys.stderr)
                print(f"{phase.upper()}: {len(cycles)} cycles, {I} documents, K={K}", file=sys.stderr)
                print("=" * 60, file=sys.stderr)

            for cycle in tqdm(cycles, desc=phase, disable=not config.show_progress):
                states = self._step_all(states, params, cycle)
                pooled = pool_assignments(
                    docs, [s.assignments for s in states], K, model.bag_specs
                )
                omega = resample_omega(
                    pooled, model.omega_prior, substream(config.seed, OMEGA_STREAM, cycle)
                )
                params = SweepParams.from_model(model, omega)

                m_all = np.array([s.proportions for s in states])
                doc_ll = document_log_likelihoods(self.corpus, m_all, omega, cycle=cycle)
                ll = float(doc_ll.sum())
                self._log_cycle(cycle, phase, ll, started)

                if phase == "burn-in":
                    burn_in_ll.append(ll)
                    continue

                recording_ll.append(ll)
                recording_doc_ll.append(doc_ll)
                m_sum += m_all
                m_sq += m_all**2
                if lam_sum is not None:
                    lam_sum += np.array([s.weights for s in states])
                for bag, mean_rows in posterior_mean_omega(pooled, model.omega_prior).items():
                    omega_sum[bag] += mean_rows

        self._write_progress_log()

        R = config.recording
        m_mean = m_sum / R
        m_std = np.sqrt(np.maximum(m_sq / R - m_mean**2, 0.0))
        trained = ComponentModel(
            **{
                **dict(model),
                "omega": {
                    bag: rows / rows.sum(axis=1, keepdims=True) for bag, rows in omega_sum.items()
                },
                "mean_proportions": m_mean.mean(axis=0),
                "cycles_trained": model.cycles_trained + config.burn_in + config.recording,
            }
        )

        if config.show_progress:
            print(f"✓ Trained K={K} in {time.perf_counter() - started:.1f}s", file=sys.stderr)

        return TrainResult(
            model=trained,
            log_likelihoods=recording_ll,
            burn_in_log_likelihoods=burn_in_ll,
            document_log_likelihoods=np.array(recording_doc_ll),
            m_mean=m_mean,
            m_std=m_std,
            intensity_mean=None if lam_sum is None else lam_sum / R,
            seconds=time.perf_counter() - started,
        )


def train(
    corpus: Corpus, model: ComponentModel, config: TrainConfig | None = None
) -> TrainResult:
    """
    Train a model on a corpus.

    Raises:
        EmptyCorpusError: No documents
        IncompatibleCorpusError: Corpus bags or vocabulary sizes differ from the model's
        NonFiniteLikelihoodError: A cycle's log likelihood is not finite (carries the cycle)
    """
    return GibbsTrainer(corpus, model, config).run()
