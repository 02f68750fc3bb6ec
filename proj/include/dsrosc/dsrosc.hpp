#ifndef DSROSC_DSROSC_HPP
#define DSROSC_DSROSC_HPP

#include "dsrosc/errors.hpp"
#include "dsrosc/params.hpp"
#include "dsrosc/kinematics.hpp"
#include "dsrosc/spectra.hpp"
#include "dsrosc/special_functions.hpp"
#include "dsrosc/operator_lab.hpp"
#include "dsrosc/verification.hpp"

#endif
