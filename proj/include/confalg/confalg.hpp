#pragma once

#include "confalg/cdmod.hpp"
#include "confalg/cohom.hpp"
#include "confalg/errors.hpp"
#include "confalg/exact/laurent.hpp"
#include "confalg/exact/linalg.hpp"
#include "confalg/exact/param_poly.hpp"
#include "confalg/exact/rational.hpp"
#include "confalg/gcmat.hpp"
#include "confalg/lca.hpp"
#include "confalg/novir.hpp"
#include "confalg/va.hpp"
