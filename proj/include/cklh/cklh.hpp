// cklh/cklh.hpp — umbrella header for the CK Lie–Hamilton library:
// curvature-parametrized trigonometry, CK geometry, conformal generator
// algebras, the two curved LH classes with invariants and superposition
// rules, application systems, integration utilities, reference tables, and
// the verification suites.
#pragma once

#include "cklh/types.hpp"
#include "cklh/ktrig.hpp"
#include "cklh/geometry.hpp"
#include "cklh/conformal.hpp"
#include "cklh/symplectic.hpp"
#include "cklh/dynamics.hpp"
#include "cklh/class_i4.hpp"
#include "cklh/class_p2.hpp"
#include "cklh/applications.hpp"
#include "cklh/tables.hpp"
#include "cklh/verify.hpp"
