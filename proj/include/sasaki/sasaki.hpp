#pragma once

#include "sasaki/error.hpp"
#include "sasaki/jet.hpp"
#include "sasaki/tensor.hpp"
#include "sasaki/random.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/contact.hpp"
#include "sasaki/space_forms.hpp"
#include "sasaki/heat.hpp"
#include "sasaki/spectrum.hpp"
#include "sasaki/classifier.hpp"
#include "sasaki/report.hpp"
