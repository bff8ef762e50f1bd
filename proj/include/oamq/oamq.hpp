#pragma once

// Umbrella header.

#include "oamq/errors.hpp"
#include "oamq/fock.hpp"
#include "oamq/probe.hpp"
#include "oamq/dense.hpp"
#include "oamq/tensor_fixture.hpp"
#include "oamq/qfim.hpp"
#include "oamq/loss.hpp"
#include "oamq/sweep.hpp"
#include "oamq/verify.hpp"
