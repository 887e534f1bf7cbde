#pragma once

// Umbrella header for the library part (everything except the CLI front end).

#include "ratseq/closed_form.hpp"
#include "ratseq/core_model.hpp"
#include "ratseq/errors.hpp"
#include "ratseq/rational.hpp"
#include "ratseq/recurrence_engine.hpp"
#include "ratseq/reduced_solver.hpp"
#include "ratseq/symmetry_lab.hpp"
#include "ratseq/verify.hpp"
