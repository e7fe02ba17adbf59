#!/usr/bin/env python3
"""Regenerates the FCIDUMP fixtures and their reference energies.

Requires pyscf. Run from this directory:  python3 generate_fixtures.py
Writes <name>.fcidump and reference_energies.json.
"""
import json

from pyscf import ao2mo, fci, gto, mcscf, scf
from pyscf.tools import fcidump

SYSTEMS = {
    "h2": "H 0 0 0; H 0 0 0.7414",
    "h2_stretched": "H 0 0 0; H 0 0 2.0",
    "h4_chain": "H 0 0 0; H 0 0 1.0; H 0 0 2.0; H 0 0 3.0",
    "lih": "Li 0 0 0; H 0 0 1.595",
}


def spin_sector_energies(h1, eri, norb, nelec, ecore):
    """Lowest singlet and lowest triplet (M_s = 1) in the n-electron space."""
    solver = fci.direct_spin1.FCI()
    solver = fci.addons.fix_spin_(solver, ss=0.0, shift=2.0)
    e_s, _ = solver.kernel(h1, eri, norb, (nelec // 2, nelec // 2), ecore=ecore)
    solver_t = fci.direct_spin1.FCI()
    solver_t = fci.addons.fix_spin_(solver_t, ss=2.0, shift=2.0)
    e_t, _ = solver_t.kernel(h1, eri, norb, (nelec // 2 + 1, nelec // 2 - 1), ecore=ecore)
    return float(e_s), float(e_t)


def main():
    refs = {}
    for name, atom in SYSTEMS.items():
        mol = gto.M(atom=atom, basis="sto-3g", unit="Angstrom", verbose=0)
        mf = scf.RHF(mol).run(conv_tol=1e-12)
        fcidump.from_scf(mf, f"{name}.fcidump", tol=1e-14)

        norb = mf.mo_coeff.shape[1]
        h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
        eri = ao2mo.restore(1, ao2mo.kernel(mol, mf.mo_coeff), norb)
        ecore = mol.energy_nuc()
        e_fci, _ = fci.direct_spin1.FCI().kernel(h1, eri, norb, mol.nelectron, ecore=ecore)
        e_s, e_t = spin_sector_energies(h1, eri, norb, mol.nelectron, ecore)
        entry = {
            "n_spatial": int(norb),
            "n_electrons": int(mol.nelectron),
            "e_rhf": float(mf.e_tot),
            "e_fci": float(e_fci),
            "e_singlet": e_s,
            "e_triplet": e_t,
        }
        if name == "lih":
            cas = mcscf.CASCI(mf, norb - 1, mol.nelectron - 2)
            cas.fcisolver.conv_tol = 1e-13
            entry["e_fci_frozen_core"] = float(cas.kernel()[0])
        refs[name] = entry

    with open("reference_energies.json", "w") as f:
        json.dump(refs, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
