from savark.models.allen_cahn import AllenCahn
from savark.models.base import GradientFlowModel, LinearizedModel, without_nonlinearity
from savark.models.cahn_hilliard import CahnHilliard
from savark.models.mbe import MolecularBeamEpitaxy
from savark.models.registry import Energies, energies, make_ac, make_ch, make_mbe, make_model, q_init
from savark.models.sources import ManufacturedSolution, SourceTerm, sine_product_cosine_time

__all__ = [
    "AllenCahn",
    "CahnHilliard",
    "Energies",
    "GradientFlowModel",
    "LinearizedModel",
    "ManufacturedSolution",
    "MolecularBeamEpitaxy",
    "SourceTerm",
    "energies",
    "make_ac",
    "make_ch",
    "make_mbe",
    "make_model",
    "q_init",
    "sine_product_cosine_time",
    "without_nonlinearity",
]
