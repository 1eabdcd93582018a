#pragma once

#include "fqc/errors.hpp"
#include "fqc/random.hpp"
#include "fqc/qstate.hpp"
#include "fqc/faraday.hpp"
#include "fqc/protocol.hpp"
#include "fqc/imperfect.hpp"
#include "fqc/estimator.hpp"
#include "fqc/oracle.hpp"
#include "fqc/cli.hpp"
