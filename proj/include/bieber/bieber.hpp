#pragma once

#include "bieber/abelian.hpp"
#include "bieber/arith.hpp"
#include "bieber/characters.hpp"
#include "bieber/classgroups.hpp"
#include "bieber/cohomology.hpp"
#include "bieber/cyclotomic_field.hpp"
#include "bieber/error.hpp"
#include "bieber/genus.hpp"
#include "bieber/lattice.hpp"
#include "bieber/matrix.hpp"
#include "bieber/numeric.hpp"
#include "bieber/orbits.hpp"
#include "bieber/polynomial.hpp"
#include "bieber/snf.hpp"
#include "bieber/units.hpp"
