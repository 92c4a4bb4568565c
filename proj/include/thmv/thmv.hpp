#pragma once

#include "thmv/bench.hpp"
#include "thmv/costmodel.hpp"
#include "thmv/error.hpp"
#include "thmv/genrand.hpp"
#include "thmv/instance.hpp"
#include "thmv/khatri_rao.hpp"
#include "thmv/matrix.hpp"
#include "thmv/oracle_common.hpp"
#include "thmv/reference.hpp"
#include "thmv/semiring.hpp"
#include "thmv/type1.hpp"
#include "thmv/type2.hpp"
#include "thmv/verify.hpp"
