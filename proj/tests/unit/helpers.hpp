#pragma once

#include "../support/synthetic.hpp"
