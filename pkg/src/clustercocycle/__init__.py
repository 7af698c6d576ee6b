"""Cluster coordinates, K2 wedge elements and the Bloch group for the cocycle of a split group."""

from .bd_complex import c3_element, c3_to_bd, killing_verification
from .bloch import BlochElement, five_term, motivic_volume
from .cluster_seed import Seed, a_mutation, c2_element, conf4_seeds, find_mutation_path, triangle_seed
from .dilog import bloch_wigner, li2, volume_real
from .k2_wedge import WedgeElement, evaluate_wedge, residue_match_c3, tame_symbol_formal
from .quiver import Quiver, build_triangle_quiver, mutate_quiver
from .root_system import CartanData, WeylWord, cartan_data, longest_word

__all__ = [
    "BlochElement", "CartanData", "Quiver", "Seed", "WedgeElement", "WeylWord",
    "a_mutation", "bloch_wigner", "build_triangle_quiver", "c2_element", "c3_element", "c3_to_bd",
    "cartan_data", "conf4_seeds", "evaluate_wedge", "find_mutation_path", "five_term",
    "killing_verification", "li2", "longest_word", "motivic_volume", "mutate_quiver",
    "residue_match_c3", "tame_symbol_formal", "triangle_seed", "volume_real",
]
