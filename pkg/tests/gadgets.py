"""Small trees on which each encoder part of corollary_instance(1) holds
(PASS) or fails (FAIL).  Labels are comma-separated proposition names.

Failing trees trigger the part's antecedent and violate its conclusion;
passing trees trigger the antecedent where a small witness exists.
"""
from hbtl.models import tree_from_nested


def T(label, *kids):
    return (label, list(kids))


PASS = {
    "chi1": T("row_e", T("pos_e", T("o"))),
    "chi2": T("row_e", T("pos_e")),
    "chi3": T("pos_e", T("o")),
    "chi4": T("d_0,e_0,row_e"),
    "chi5": T("o", T("c")),
    "chi6": T("row_e"),
    "chi7": T(""),
    "chi8": T(""),
    "chi9": T("row_e", T("o,b_0"), T("row_o")),
    "chi10": T("pos_e", T("o")),
    "psi1": T("c"),
    "psi2": T("o,p_0l", T("o,p_0l")),
    "psi3": T("o,p_0l"),
    "psi4": T(""),
    "psi5": T(""),
    "psi6": T("o,p_0l"),
    "psi7": T("o,b_0,b"),
}

FAIL = {
    "chi1": T("o,c"),
    "chi2": T(""),
    "chi3": T("pos_e", T("o,b_0")),
    "chi4": T(""),
    "chi5": T("o"),
    "chi6": T("o"),
    "chi7": T("row_e"),
    "chi8": T("o", T("c,b_0")),
    "chi9": T("row_e", T("o,b_0", T("row_e"), T("c,b_0"))),
    "chi10": T("pos_e", T("", T("")), T("", T(""))),
    "psi1": T(""),
    "psi2": T("o"),
    "psi3": T("o", T("pos_e", T("o,p_0l"))),
    "psi4": T("o,p_0l"),
    "psi5": T("o,p_0l", T("o,b_0", T("c,b_0"))),
    "psi6": T("o"),
    "psi7": T("o,b_0,b", T("qsharp")),
}


def tree(nested):
    return tree_from_nested(nested)
