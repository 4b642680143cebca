use crate::domain::{InputBox, Point};
use crate::expr::{eval_condition, EvalError, PathCondition};

/// A path condition bound to the input box it is sampled over.
///
/// A point is accepted when it lies inside the box and satisfies the
/// condition. Grids may enlarge the box; points drawn from the enlarged part
/// are never accepted.
#[derive(Clone, Copy, Debug)]
pub struct Target<'a> {
    pc: &'a PathCondition,
    domain: &'a InputBox,
}

impl<'a> Target<'a> {
    /// Fails if the condition mentions a variable the box does not declare.
    pub fn new(pc: &'a PathCondition, domain: &'a InputBox) -> Result<Self, EvalError> {
        if let Some(v) = pc.free_vars().into_iter().find(|v| domain.index_of(v).is_none()) {
            return Err(EvalError::UnboundVariable(v.to_string()));
        }
        Ok(Target { pc, domain })
    }

    pub fn pc(&self) -> &'a PathCondition {
        self.pc
    }

    pub fn domain(&self) -> &'a InputBox {
        self.domain
    }

    pub fn accepts(&self, p: &Point) -> bool {
        self.domain.contains(p)
            && eval_condition(self.pc, &self.domain.bind(p)).expect("variables checked in Target::new")
    }
}
