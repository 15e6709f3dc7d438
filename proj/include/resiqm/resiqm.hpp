#pragma once

#include "resiqm/classical.hpp"
#include "resiqm/core.hpp"
#include "resiqm/error.hpp"
#include "resiqm/gwpt.hpp"
#include "resiqm/potential.hpp"
#include "resiqm/quantum.hpp"
#include "resiqm/scenario/config.hpp"
#include "resiqm/scenario/output.hpp"
#include "resiqm/scenario/record.hpp"
#include "resiqm/scenario/runner.hpp"
#include "resiqm/transform.hpp"
#include "resiqm/tridiagonal.hpp"
