#ifndef CURVOSC_CURVOSC_HPP
#define CURVOSC_CURVOSC_HPP

#include "curvosc/rational.hpp"
#include "curvosc/ktrig.hpp"
#include "curvosc/wavealg.hpp"
#include "curvosc/qops.hpp"
#include "curvosc/spectrum.hpp"
#include "curvosc/classical.hpp"
#include "curvosc/limits.hpp"

#endif
